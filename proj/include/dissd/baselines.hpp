#ifndef DISSD_BASELINES_HPP
#define DISSD_BASELINES_HPP

#include <vector>

#include "dissd/cluster.hpp"
#include "dissd/dissd_mest.hpp"
#include "dissd/init.hpp"

namespace dissd {

struct OneshotOptions {
  double lambda0_scale = 0.5;  // local initializer l1 scale
  double lambda_scale = 1.0;   // per-machine precision l1 scale
  double bandwidth = 0.1;
  double scio_tol = 1e-7;
  std::size_t scio_max_sweeps = 10000;
};

// Classical one-shot averaging: every machine fits a local l1 estimator,
// builds a precision estimate from its own n covariates, debiases locally,
// and the master averages the m debiased vectors. Charges m precision builds
// and m*p floats up; a local solver failure is reported with its machine.
Vector oneshot_avg_debias(Cluster& cluster, const MEstLoss& loss,
                          const Kernel& kernel, const OneshotOptions& opts);

struct CslOptions {
  double lambda = 0.0;             // per-round l1 level (fixed schedule)
  double lambda0_scale = 0.5;      // initializer
  std::size_t max_inner_iter = 5000;
  double inner_tol = 1e-7;
};

struct CslResult {
  std::vector<Vector> history;     // [0..T], entry 0 is the initializer
  std::vector<double> elapsed_ms;  // cumulative wall time per entry
};

// Surrogate-likelihood rounds: the master solves its local loss shifted by
// the gradient correction <grad_master - avg_grad, beta> plus an l1 penalty,
// warm-started at the previous iterate (so each solve descends the surrogate).
// Requires a smooth loss; the absolute loss is rejected.
CslResult csl(Cluster& cluster, const MEstLoss& loss, std::size_t rounds,
              const CslOptions& opts);

// Thin wrappers over the proximal solver.
Vector pooled_lasso(const ClusterData& data, const MEstLoss& loss,
                    double lambda, int threads = 1);
Vector local_lasso(const ClusterData& data, const MEstLoss& loss,
                   double lambda, int threads = 1);

}  // namespace dissd

#endif  // DISSD_BASELINES_HPP
