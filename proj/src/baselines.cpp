#include "dissd/baselines.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>

#include "dissd/errors.hpp"

namespace dissd {

Vector oneshot_avg_debias(Cluster& cluster, const MEstLoss& loss,
                          const Kernel& kernel, const OneshotOptions& opts) {
  const std::size_t p = cluster.dim();
  const std::size_t m = cluster.machines();

  std::vector<Vector> debiased(m);
  std::vector<std::exception_ptr> errors(m);
  std::atomic<std::uint64_t> builds{0};

  parallel_for(m, cluster.threads(), [&](std::size_t j) {
    try {
      const Shard& shard = cluster.shard(j);
      const double n = static_cast<double>(shard.size());
      const double log_p = std::log(static_cast<double>(p));

      ProxOptions prox;
      prox.lambda = opts.lambda0_scale * std::sqrt(log_p / n);
      const Vector beta_j = prox_lasso(shard, loss, prox).beta;

      ScioOptions scio_opts;
      scio_opts.tol = opts.scio_tol;
      scio_opts.max_sweeps = opts.scio_max_sweeps;
      const PrecisionEstimate omega_j =
          scio_full(shard.x, opts.lambda_scale, scio_opts);
      builds.fetch_add(1);

      const double h_j = local_h(shard, loss, kernel, beta_j, opts.bandwidth);
      if (std::abs(h_j) < 1e-8) {
        throw NumericalError("degenerate curvature estimate");
      }
      const Vector grad_j = local_gradient(shard, loss, beta_j);
      debiased[j] = debias_update(beta_j, omega_j, grad_j, h_j);
    } catch (...) {
      errors[j] = std::current_exception();
    }
  });

  cluster.ledger().precision_builds += builds.load();
  for (std::size_t j = 0; j < m; ++j) {
    if (!errors[j]) continue;
    try {
      std::rethrow_exception(errors[j]);
    } catch (const std::exception& e) {
      throw NumericalError("oneshot_avg_debias: machine " + std::to_string(j + 1) +
                           ": " + e.what());
    }
  }
  return gather_average(debiased, &cluster.ledger());
}

namespace {

// Surrogate objective on the master: local mean loss minus the gradient
// correction, plus the l1 penalty.
double csl_surrogate(const Shard& shard, const MEstLoss& loss,
                     const Vector& shift, const Vector& beta, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < shard.size(); ++i) {
    s += loss.value(dot(shard.x[i], beta) - shard.y[i]);
  }
  s /= static_cast<double>(shard.size());
  return s - dot(shift, beta) + lambda * norm1(beta);
}

// Proximal gradient on the shifted local problem, warm-started; the step is
// halved whenever the surrogate would rise, so the solve is a descent.
Vector csl_inner_solve(const Shard& shard, const MEstLoss& loss,
                       const Vector& shift, const Vector& start, double lambda,
                       double step, std::size_t max_iter, double tol) {
  const std::size_t p = start.size();
  Vector beta = start;
  double obj = csl_surrogate(shard, loss, shift, beta, lambda);
  Vector cand(p);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    Vector grad = local_gradient(shard, loss, beta);
    for (std::size_t l = 0; l < p; ++l) grad[l] -= shift[l];
    bool accepted = false;
    while (step >= 1e-18) {
      for (std::size_t l = 0; l < p; ++l) {
        cand[l] = soft_threshold(beta[l] - step * grad[l], step * lambda);
      }
      const double cand_obj = csl_surrogate(shard, loss, shift, cand, lambda);
      if (std::isfinite(cand_obj) && cand_obj <= obj) {
        obj = cand_obj;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double change = max_abs_diff(beta, cand);
    beta.swap(cand);
    if (change < tol) break;
  }
  return beta;
}

}  // namespace

CslResult csl(Cluster& cluster, const MEstLoss& loss, std::size_t rounds,
              const CslOptions& opts) {
  if (!loss.is_smooth) {
    throw ConfigError("csl: requires a smooth loss (absolute deviation excluded)");
  }
  const std::size_t p = cluster.dim();
  const Shard& master = cluster.master_shard();
  const double n = static_cast<double>(master.size());
  const double log_p = std::log(static_cast<double>(p));
  const double mn = static_cast<double>(cluster.labeled_total());

  const double lambda =
      opts.lambda > 0.0 ? opts.lambda : 0.5 * std::sqrt(log_p / mn);

  CslResult res;
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&t0]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };
  ProxOptions prox;
  prox.lambda = opts.lambda0_scale * std::sqrt(log_p / n);
  prox.threads = cluster.threads();
  res.history.push_back(prox_lasso(master, loss, prox).beta);
  res.elapsed_ms.push_back(elapsed());

  const double step0 = 1.0 / lipschitz_estimate(master.x, loss.curvature_bound);

  for (std::size_t t = 0; t < rounds; ++t) {
    const Vector& beta = res.history.back();
    cluster.charge_broadcast(p);
    std::vector<Vector> grads =
        cluster.map_machines<Vector>([&](std::size_t, const Shard& shard) {
          return local_gradient(shard, loss, beta);
        });
    const Vector avg_grad = gather_average(grads, &cluster.ledger());
    const Vector& master_grad = grads.front();
    Vector shift(p);
    for (std::size_t l = 0; l < p; ++l) shift[l] = master_grad[l] - avg_grad[l];

    res.history.push_back(csl_inner_solve(master, loss, shift, beta, lambda,
                                          step0, opts.max_inner_iter,
                                          opts.inner_tol));
    res.elapsed_ms.push_back(elapsed());
    cluster.ledger().rounds += 1;
  }
  return res;
}

Vector pooled_lasso(const ClusterData& data, const MEstLoss& loss,
                    double lambda, int threads) {
  std::vector<Vector> x;
  Vector y;
  x.reserve(data.labeled_total());
  y.reserve(data.labeled_total());
  for (const Shard& s : data.shards) {
    x.insert(x.end(), s.x.begin(), s.x.end());
    y.insert(y.end(), s.y.begin(), s.y.end());
  }
  ProxOptions prox;
  prox.lambda = lambda;
  prox.threads = threads;
  return prox_lasso(x, y, loss, prox).beta;
}

Vector local_lasso(const ClusterData& data, const MEstLoss& loss,
                   double lambda, int threads) {
  ProxOptions prox;
  prox.lambda = lambda;
  prox.threads = threads;
  return prox_lasso(data.shards.front(), loss, prox).beta;
}

}  // namespace dissd
