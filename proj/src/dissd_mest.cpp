#include "dissd/dissd_mest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dissd/errors.hpp"
#include "dissd/init.hpp"
#include "dissd/rng.hpp"

namespace dissd {

Vector local_gradient(const Shard& shard, const MEstLoss& loss,
                      const Vector& beta) {
  const std::size_t n = shard.size();
  const std::size_t p = beta.size();
  Vector g(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = dot(shard.x[i], beta) - shard.y[i];
    const double w = loss.first_deriv(r);
    const Vector& xi = shard.x[i];
    for (std::size_t l = 0; l < p; ++l) g[l] += w * xi[l];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : g) v *= inv_n;
  return g;
}

double local_h(const Shard& shard, const MEstLoss& loss, const Kernel& kernel,
               const Vector& beta, double bandwidth) {
  if (bandwidth <= 0.0) throw ConfigError("local_h: bandwidth must be positive");
  const std::size_t n = shard.size();
  double smooth = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    smooth += loss.second_deriv(dot(shard.x[i], beta) - shard.y[i]);
  }
  smooth /= static_cast<double>(n);
  if (loss.discontinuities.empty()) return smooth;

  // Jump contributions; the shipped losses jump only at 0 and use an even
  // kernel, so the residual orientation does not matter here.
  double jumps = 0.0;
  for (const Discontinuity& d : loss.discontinuities) {
    double kernel_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = dot(shard.x[i], beta) - shard.y[i];
      kernel_sum += kernel.eval((r - d.location) / bandwidth);
    }
    jumps += d.gap * kernel_sum / (static_cast<double>(n) * bandwidth);
  }
  return smooth + jumps;
}

Vector debias_update(const Vector& beta, const PrecisionEstimate& precision,
                     const Vector& avg_gradient, double h) {
  const Vector correction = precision.apply(avg_gradient);
  Vector out(beta.size());
  const double inv_h = 1.0 / h;
  for (std::size_t l = 0; l < beta.size(); ++l) {
    out[l] = beta[l] - inv_h * correction[l];
  }
  return out;
}

DissdState dissd_round(Cluster& cluster, const DissdState& state,
                       const PrecisionEstimate& precision, const MEstLoss& loss,
                       const Kernel& kernel, double bandwidth, double tau) {
  if (bandwidth <= 0.0) {
    throw ConfigError("dissd_round: bandwidth must be positive");
  }
  const std::size_t p = cluster.dim();
  const Vector& beta = state.beta_hat;

  cluster.charge_broadcast(p);

  struct Payload {
    Vector grad;
    double h = 0.0;
  };
  std::vector<Payload> payloads =
      cluster.map_machines<Payload>([&](std::size_t, const Shard& shard) {
        Payload out;
        out.grad = local_gradient(shard, loss, beta);
        out.h = local_h(shard, loss, kernel, beta, bandwidth);
        return out;
      });

  std::vector<Vector> grads(payloads.size());
  std::vector<double> hs(payloads.size());
  for (std::size_t j = 0; j < payloads.size(); ++j) {
    grads[j] = std::move(payloads[j].grad);
    hs[j] = payloads[j].h;
  }
  const Vector avg_grad = gather_average(grads, &cluster.ledger());
  const double h_hat = gather_average(hs, &cluster.ledger());
  if (std::abs(h_hat) < 1e-8) {
    throw NumericalError("dissd_round: degenerate curvature estimate");
  }

  DissdState next;
  next.beta_bar = debias_update(beta, precision, avg_grad, h_hat);
  next.beta_hat = hard_threshold(next.beta_bar, tau);
  next.round = state.round + 1;
  next.h_hat = h_hat;
  next.tau = tau;
  cluster.ledger().rounds += 1;
  return next;
}

TauSchedule TauSchedule::make(const DissdOptions& opts, std::size_t p,
                              std::size_t m, std::size_t n, std::size_t n_star,
                              bool glm) {
  TauSchedule sched;
  sched.tau_scale = opts.tau_scale;
  sched.s = static_cast<double>(opts.sparsity);
  sched.log_p = std::log(static_cast<double>(p));
  sched.mn = static_cast<double>(m) * static_cast<double>(n);
  sched.n_star = static_cast<double>(n_star);
  sched.r = opts.r0_scale * std::sqrt(sched.s * sched.log_p / static_cast<double>(n));
  sched.glm = glm;
  return sched;
}

double TauSchedule::tau() const {
  const double pooled = std::sqrt(log_p / mn);
  const double semi = r * s * std::sqrt(log_p / n_star);
  const double quad = glm ? s * log_p * log_p * r * r : r * r;
  return tau_scale * (pooled + semi + quad);
}

void TauSchedule::advance() {
  const double next = std::sqrt(log_p / mn) + r * std::sqrt(log_p / n_star);
  r = std::min(r, next);
}

namespace {

Vector random_init(std::size_t p, std::uint64_t seed) {
  Rng rng(seed, 0xD15D);
  Vector beta(p);
  for (double& v : beta) v = rng.uniform01() - 0.5;
  return beta;
}

}  // namespace

double master_lambda_scale(const DissdOptions& opts, const Cluster& cluster) {
  // With fewer master rows than coordinates the row objectives of the
  // precision solve need a larger penalty to stay bounded below; the
  // sqrt(p / rows) inflation keeps the prescribed order and only engages in
  // the overcomplete regime.
  const double rows = static_cast<double>(cluster.master_rows());
  const double p = static_cast<double>(cluster.dim());
  return opts.lambda_scale * std::max(1.0, std::sqrt(p / rows));
}

Vector dissd_initializer(Cluster& cluster, const MEstLoss& loss,
                         const DissdOptions& opts) {
  const std::size_t p = cluster.dim();
  const std::size_t n = cluster.shard_size();
  switch (opts.init) {
    case InitKind::random:
      return random_init(p, opts.init_seed);
    case InitKind::pgd: {
      const double mn = static_cast<double>(cluster.labeled_total());
      const double lambda =
          opts.pgd_lambda_scale * std::sqrt(std::log(double(p)) / mn);
      return distributed_pgd_init(cluster, loss, lambda, opts.init_rounds);
    }
    case InitKind::local:
      break;
  }
  ProxOptions prox;
  prox.lambda = opts.lambda0_scale * std::sqrt(std::log(double(p)) / double(n));
  prox.threads = cluster.threads();
  return prox_lasso(cluster.master_shard(), loss, prox).beta;
}

RunResult run_dissd_mest(Cluster& cluster, const MEstLoss& loss,
                         const Kernel& kernel, const DissdOptions& opts) {
  if (!loss.discontinuities.empty() && opts.bandwidth <= 0.0 &&
      opts.bandwidth_rule == BandwidthRule::fixed) {
    throw ConfigError("run_dissd_mest: non-smooth loss needs a positive bandwidth");
  }

  RunResult res;
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&t0]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  // Precision estimate: built exactly once, from every covariate row the
  // master holds, and reused by all rounds.
  ScioOptions scio_opts;
  scio_opts.threads = cluster.threads();
  res.precision = scio_full(cluster.master_covariates(),
                            master_lambda_scale(opts, cluster), scio_opts);
  cluster.ledger().precision_builds += 1;

  DissdState state;
  state.beta_hat = dissd_initializer(cluster, loss, opts);
  state.beta_bar = state.beta_hat;
  res.init_floats = cluster.ledger().total();
  res.history.push_back(state);
  res.elapsed_ms.push_back(elapsed());

  TauSchedule sched = TauSchedule::make(opts, cluster.dim(), cluster.machines(),
                                        cluster.shard_size(),
                                        cluster.master_rows(), /*glm=*/false);
  for (std::size_t t = 0; t < opts.rounds; ++t) {
    const double h_t = opts.bandwidth_rule == BandwidthRule::fixed
                           ? opts.bandwidth
                           : std::clamp(sched.rate(), 0.01, 1.0);
    const double tau = sched.tau();
    state = dissd_round(cluster, state, res.precision, loss, kernel, h_t, tau);
    sched.advance();
    res.history.push_back(state);
    res.elapsed_ms.push_back(elapsed());
  }

  if (opts.with_variance) {
    // One extra exchange at the final iterate: each machine reports its mean
    // squared gradient slope and a fresh curvature estimate (2 scalars up,
    // one p-vector broadcast down).
    const Vector& beta = state.beta_hat;
    cluster.charge_broadcast(cluster.dim());
    struct VarPayload {
      double fprime_sq = 0.0;
      double h = 0.0;
    };
    const double h_t = opts.bandwidth_rule == BandwidthRule::fixed
                           ? opts.bandwidth
                           : std::clamp(sched.rate(), 0.01, 1.0);
    std::vector<VarPayload> payloads =
        cluster.map_machines<VarPayload>([&](std::size_t, const Shard& shard) {
          VarPayload out;
          for (std::size_t i = 0; i < shard.size(); ++i) {
            const double d =
                loss.first_deriv(dot(shard.x[i], beta) - shard.y[i]);
            out.fprime_sq += d * d;
          }
          out.fprime_sq /= static_cast<double>(shard.size());
          out.h = local_h(shard, loss, kernel, beta, h_t);
          return out;
        });
    std::vector<double> fsq(payloads.size()), hs(payloads.size());
    for (std::size_t j = 0; j < payloads.size(); ++j) {
      fsq[j] = payloads[j].fprime_sq;
      hs[j] = payloads[j].h;
    }
    res.fprime_sq_mean = gather_average(fsq, &cluster.ledger());
    res.h_final = gather_average(hs, &cluster.ledger());
  } else if (!res.history.empty()) {
    res.h_final = state.h_hat;
  }

  res.ledger = cluster.ledger();
  return res;
}

}  // namespace dissd
