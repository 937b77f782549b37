#ifndef DISSD_DISSD_GLM_HPP
#define DISSD_DISSD_GLM_HPP

#include "dissd/dissd_mest.hpp"

namespace dissd {

// (1/n) sum (1/psi''(x_i'beta)) * (psi'(x_i'beta) - y_i) x_i with psi''
// clipped from below at link.psi2_floor. Labeled rows only.
Vector weighted_gradient(const Shard& shard, const GlmLink& link,
                         const Vector& beta);

// Same broadcast/gather/average/update/threshold cycle as the M-estimation
// round but without the curvature scalar (the weighting removes it).
// Charges m*p down and m*p up.
DissdState dissd_glm_round(Cluster& cluster, const DissdState& state,
                           const PrecisionEstimate& precision,
                           const GlmLink& link, double tau);

Vector dissd_glm_initializer(Cluster& cluster, const GlmLink& link,
                             const DissdOptions& opts);

// GLM driver; the threshold schedule uses the s*(log p)^2*r^2 curvature term.
RunResult run_dissd_glm(Cluster& cluster, const GlmLink& link,
                        const DissdOptions& opts);

}  // namespace dissd

#endif  // DISSD_DISSD_GLM_HPP
