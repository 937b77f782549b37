#ifndef DISSD_INFERENCE_HPP
#define DISSD_INFERENCE_HPP

#include <cstddef>
#include <vector>

#include "dissd/cluster.hpp"
#include "dissd/linalg.hpp"
#include "dissd/losses.hpp"
#include "dissd/scio.hpp"

namespace dissd {

// Standard normal CDF.
double normal_cdf(double x);

// Inverse standard normal CDF: Acklam's rational approximation (max relative
// error 1.15e-9) polished by one Halley step against erfc, giving ~1e-15.
double inv_normal_cdf(double u);

// Plug-in asymptotic variance for an M-estimation coordinate:
// sigma_l^2 = mean(f'(r)^2) / h^2 * Omega_ll. residual_grads are the pooled
// f'(r_i) values at the final iterate. Throws when |h_hat| < 1e-8.
double sigma_mest(std::size_t l, const PrecisionEstimate& precision,
                  double h_hat, const std::vector<double>& residual_grads);

// GLM coordinate variance: omega_l' [(1/N) sum x x'/max(psi''(x'beta), floor)]
// omega_l, accumulated shard by shard in machine order.
double sigma_glm(std::size_t l, const PrecisionEstimate& precision,
                 const Cluster& cluster, const Vector& beta,
                 const GlmLink& link);
double sigma_glm(std::size_t l, const PrecisionEstimate& precision,
                 const std::vector<Vector>& covariates, const Vector& beta,
                 const GlmLink& link);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// beta_bar_l +/- z_{(1+level)/2} * sigma_l / sqrt(mn). Intervals are built
// from the dense (un-thresholded) iterate. level must lie in (0,1).
Interval confidence_interval(double beta_bar_l, double sigma2_l,
                             std::size_t mn, double level);

}  // namespace dissd

#endif  // DISSD_INFERENCE_HPP
