#include "dissd/dissd_glm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dissd/errors.hpp"
#include "dissd/init.hpp"
#include "dissd/rng.hpp"

namespace dissd {

Vector weighted_gradient(const Shard& shard, const GlmLink& link,
                         const Vector& beta) {
  const std::size_t n = shard.size();
  const std::size_t p = beta.size();
  Vector g(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xb = dot(shard.x[i], beta);
    const double w2 = std::max(link.psi2(xb), link.psi2_floor);
    const double w = (link.psi1(xb) - shard.y[i]) / w2;
    const Vector& xi = shard.x[i];
    for (std::size_t l = 0; l < p; ++l) g[l] += w * xi[l];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : g) v *= inv_n;
  return g;
}

DissdState dissd_glm_round(Cluster& cluster, const DissdState& state,
                           const PrecisionEstimate& precision,
                           const GlmLink& link, double tau) {
  const std::size_t p = cluster.dim();
  const Vector& beta = state.beta_hat;

  cluster.charge_broadcast(p);
  std::vector<Vector> grads =
      cluster.map_machines<Vector>([&](std::size_t, const Shard& shard) {
        return weighted_gradient(shard, link, beta);
      });
  const Vector avg_grad = gather_average(grads, &cluster.ledger());

  DissdState next;
  next.beta_bar = debias_update(beta, precision, avg_grad, 1.0);
  next.beta_hat = hard_threshold(next.beta_bar, tau);
  next.round = state.round + 1;
  next.h_hat = 1.0;
  next.tau = tau;
  cluster.ledger().rounds += 1;
  return next;
}

Vector dissd_glm_initializer(Cluster& cluster, const GlmLink& link,
                             const DissdOptions& opts) {
  const std::size_t p = cluster.dim();
  const std::size_t n = cluster.shard_size();
  switch (opts.init) {
    case InitKind::random: {
      Rng rng(opts.init_seed, 0xD15D);
      Vector beta(p);
      for (double& v : beta) v = rng.uniform01() - 0.5;
      return beta;
    }
    case InitKind::pgd: {
      const double mn = static_cast<double>(cluster.labeled_total());
      const double lambda =
          opts.pgd_lambda_scale * std::sqrt(std::log(double(p)) / mn);
      return distributed_pgd_init(cluster, link, lambda, opts.init_rounds);
    }
    case InitKind::local:
      break;
  }
  ProxOptions prox;
  prox.lambda = opts.lambda0_scale * std::sqrt(std::log(double(p)) / double(n));
  prox.threads = cluster.threads();
  return prox_lasso(cluster.master_shard(), link, prox).beta;
}

RunResult run_dissd_glm(Cluster& cluster, const GlmLink& link,
                        const DissdOptions& opts) {
  RunResult res;
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&t0]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  ScioOptions scio_opts;
  scio_opts.threads = cluster.threads();
  res.precision = scio_full(cluster.master_covariates(),
                            master_lambda_scale(opts, cluster), scio_opts);
  cluster.ledger().precision_builds += 1;

  DissdState state;
  state.beta_hat = dissd_glm_initializer(cluster, link, opts);
  state.beta_bar = state.beta_hat;
  state.h_hat = 1.0;
  res.init_floats = cluster.ledger().total();
  res.history.push_back(state);
  res.elapsed_ms.push_back(elapsed());

  TauSchedule sched = TauSchedule::make(opts, cluster.dim(), cluster.machines(),
                                        cluster.shard_size(),
                                        cluster.master_rows(), /*glm=*/true);
  for (std::size_t t = 0; t < opts.rounds; ++t) {
    const double tau = sched.tau();
    state = dissd_glm_round(cluster, state, res.precision, link, tau);
    sched.advance();
    res.history.push_back(state);
    res.elapsed_ms.push_back(elapsed());
  }
  res.h_final = 1.0;
  res.ledger = cluster.ledger();
  return res;
}

}  // namespace dissd
