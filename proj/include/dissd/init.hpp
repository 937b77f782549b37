#ifndef DISSD_INIT_HPP
#define DISSD_INIT_HPP

#include <cstddef>
#include <vector>

#include "dissd/cluster.hpp"
#include "dissd/linalg.hpp"
#include "dissd/losses.hpp"
#include "dissd/synth.hpp"

namespace dissd {

struct ProxOptions {
  double lambda = 0.0;
  double step = 0.0;        // 0 = 1/L with L from power iteration
  std::size_t max_iter = 5000;
  double tol = 1e-7;        // max coordinate change
  bool backtracking = true; // halve the step when the objective would rise
  int threads = 1;
  Vector* objective_trace = nullptr;  // optional per-iteration objective log
};

struct ProxResult {
  Vector beta;
  std::size_t iterations = 0;
  double objective = 0.0;
  double step = 0.0;  // final step actually used
};

// l1-penalized empirical risk minimization by proximal gradient descent
// (ISTA). The penalized objective never increases between iterations; with
// backtracking disabled a bad step raises NumericalError("diverged...").
ProxResult prox_lasso(const std::vector<Vector>& x, const Vector& y,
                      const MEstLoss& loss, const ProxOptions& opts);
ProxResult prox_lasso(const std::vector<Vector>& x, const Vector& y,
                      const GlmLink& link, const ProxOptions& opts);

inline ProxResult prox_lasso(const Shard& shard, const MEstLoss& loss,
                             const ProxOptions& opts) {
  return prox_lasso(shard.x, shard.y, loss, opts);
}
inline ProxResult prox_lasso(const Shard& shard, const GlmLink& link,
                             const ProxOptions& opts) {
  return prox_lasso(shard.x, shard.y, link, opts);
}

// Largest eigenvalue of the shard's second-moment matrix times the loss
// curvature bound, by 50 power-iteration steps through the data matrix.
double lipschitz_estimate(const std::vector<Vector>& x, double curvature_bound);

// Early-stopped distributed proximal gradient descent: each round broadcasts
// beta, gathers full local gradients, and takes one proximal step on the
// master. The step is sized from the master's covariates (labeled +
// unlabeled). Charges m*p down and m*p up per round.
Vector distributed_pgd_init(Cluster& cluster, const MEstLoss& loss,
                            double lambda, std::size_t rounds, double step = 0.0);
Vector distributed_pgd_init(Cluster& cluster, const GlmLink& link,
                            double lambda, std::size_t rounds, double step = 0.0);

}  // namespace dissd

#endif  // DISSD_INIT_HPP
