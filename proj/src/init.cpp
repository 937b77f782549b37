#include "dissd/init.hpp"

#include <cmath>

#include "dissd/errors.hpp"

namespace dissd {

namespace {

constexpr std::size_t kChunk = 2048;  // fixed chunking keeps parallel sums deterministic

struct MEstAdapter {
  const MEstLoss* loss;
  double value(double xb, double y) const { return loss->value(xb - y); }
  double deriv(double xb, double y) const { return loss->first_deriv(xb - y); }
};

struct GlmAdapter {
  const GlmLink* link;
  double value(double xb, double y) const { return -y * xb + link->psi(xb); }
  double deriv(double xb, double y) const { return link->psi1(xb) - y; }
};

// Mean loss over rows; also fills xb[i] = x_i . beta. Chunk partials are
// combined in chunk order so the result does not depend on the thread count.
template <class Adapter>
double data_loss(const std::vector<Vector>& x, const Vector& y,
                 const Adapter& ad, const Vector& beta, Vector* xb,
                 int threads) {
  const std::size_t n = x.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = dot(x[i], beta);
      (*xb)[i] = v;
      s += ad.value(v, y[i]);
    }
    partial[c] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total / static_cast<double>(n);
}

template <class Adapter>
Vector data_gradient(const std::vector<Vector>& x, const Vector& y,
                     const Adapter& ad, const Vector& xb, int threads) {
  const std::size_t n = x.size();
  const std::size_t p = x.front().size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Vector> partial(chunks, Vector(p, 0.0));
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    Vector& g = partial[c];
    for (std::size_t i = lo; i < hi; ++i) {
      const double w = ad.deriv(xb[i], y[i]);
      const Vector& xi = x[i];
      for (std::size_t l = 0; l < p; ++l) g[l] += w * xi[l];
    }
  });
  Vector g(p, 0.0);
  for (const Vector& part : partial) {
    for (std::size_t l = 0; l < p; ++l) g[l] += part[l];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : g) v *= inv_n;
  return g;
}

template <class Adapter>
ProxResult ista(const std::vector<Vector>& x, const Vector& y,
                const Adapter& ad, double curvature, ProxOptions opts) {
  if (x.empty()) throw ConfigError("prox_lasso: empty shard");
  const std::size_t p = x.front().size();

  double step = opts.step > 0.0 ? opts.step
                                : 1.0 / lipschitz_estimate(x, curvature);

  Vector beta(p, 0.0);
  Vector xb(x.size(), 0.0);
  double obj = data_loss(x, y, ad, beta, &xb, opts.threads);  // penalty is 0 at 0
  if (opts.objective_trace) opts.objective_trace->push_back(obj);

  ProxResult res;
  std::size_t iter = 0;
  Vector cand(p), cand_xb(x.size());
  while (iter < opts.max_iter) {
    ++iter;
    const Vector grad = data_gradient(x, y, ad, xb, opts.threads);
    bool accepted = false;
    bool stalled = false;
    for (;;) {
      for (std::size_t l = 0; l < p; ++l) {
        cand[l] = soft_threshold(beta[l] - step * grad[l], step * opts.lambda);
      }
      double cand_obj = data_loss(x, y, ad, cand, &cand_xb, opts.threads) +
                        opts.lambda * norm1(cand);
      if (!std::isfinite(cand_obj)) {
        if (!opts.backtracking) {
          throw NumericalError("prox_lasso: diverged; reduce step");
        }
        step *= 0.5;
        continue;
      }
      if (!opts.backtracking || cand_obj <= obj) {
        accepted = true;
        obj = cand_obj;
        break;
      }
      if (step < 1e-18) {  // no descent direction left (kink of a non-smooth loss)
        stalled = true;
        break;
      }
      step *= 0.5;
    }
    if (stalled) break;
    if (!accepted) break;
    const double change = max_abs_diff(beta, cand);
    beta.swap(cand);
    xb.swap(cand_xb);
    if (opts.objective_trace) opts.objective_trace->push_back(obj);
    if (change < opts.tol) break;
  }
  res.beta = std::move(beta);
  res.iterations = iter;
  res.objective = obj;
  res.step = step;
  return res;
}

}  // namespace

double lipschitz_estimate(const std::vector<Vector>& x, double curvature_bound) {
  const std::size_t n = x.size();
  const std::size_t p = x.front().size();
  Vector v(p);
  for (std::size_t l = 0; l < p; ++l) {
    v[l] = 1.0 + static_cast<double>(l) / static_cast<double>(p);
  }
  double lam = 1.0;
  for (int it = 0; it < 50; ++it) {
    Vector w(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = dot(x[i], v);
      for (std::size_t l = 0; l < p; ++l) w[l] += u * x[i][l];
    }
    for (double& e : w) e /= static_cast<double>(n);
    lam = norm2(w);
    if (lam <= 0.0) break;
    for (std::size_t l = 0; l < p; ++l) v[l] = w[l] / lam;
  }
  return std::max(lam * curvature_bound, 1e-12);
}

ProxResult prox_lasso(const std::vector<Vector>& x, const Vector& y,
                      const MEstLoss& loss, const ProxOptions& opts) {
  return ista(x, y, MEstAdapter{&loss}, loss.curvature_bound, opts);
}

ProxResult prox_lasso(const std::vector<Vector>& x, const Vector& y,
                      const GlmLink& link, const ProxOptions& opts) {
  return ista(x, y, GlmAdapter{&link}, link.curvature_bound, opts);
}

namespace {

template <class Adapter>
Vector pgd(Cluster& cluster, const Adapter& ad, double curvature, double lambda,
           std::size_t rounds, double step) {
  if (rounds < 1) {
    throw ConfigError("distributed_pgd_init: rounds must be >= 1");
  }
  const std::size_t p = cluster.dim();
  if (step <= 0.0) {
    // Sized from the master's covariates (unlabeled rows included); the
    // margin covers the gap to the pooled curvature.
    const std::vector<Vector> master = cluster.master_covariates();
    step = 1.0 / (1.1 * lipschitz_estimate(master, curvature));
  }
  Vector beta(p, 0.0);
  for (std::size_t t = 0; t < rounds; ++t) {
    cluster.charge_broadcast(p);
    std::vector<Vector> grads =
        cluster.template map_machines<Vector>([&](std::size_t, const Shard& shard) {
          Vector xb(shard.size());
          Vector g(p, 0.0);
          for (std::size_t i = 0; i < shard.size(); ++i) {
            xb[i] = dot(shard.x[i], beta);
            const double w = ad.deriv(xb[i], shard.y[i]);
            for (std::size_t l = 0; l < p; ++l) g[l] += w * shard.x[i][l];
          }
          const double inv_n = 1.0 / static_cast<double>(shard.size());
          for (double& v : g) v *= inv_n;
          return g;
        });
    const Vector g = gather_average(grads, &cluster.ledger());
    for (std::size_t l = 0; l < p; ++l) {
      beta[l] = soft_threshold(beta[l] - step * g[l], step * lambda);
    }
  }
  return beta;
}

}  // namespace

Vector distributed_pgd_init(Cluster& cluster, const MEstLoss& loss,
                            double lambda, std::size_t rounds, double step) {
  return pgd(cluster, MEstAdapter{&loss}, loss.curvature_bound, lambda, rounds,
             step);
}

Vector distributed_pgd_init(Cluster& cluster, const GlmLink& link,
                            double lambda, std::size_t rounds, double step) {
  return pgd(cluster, GlmAdapter{&link}, link.curvature_bound, lambda, rounds,
             step);
}

}  // namespace dissd
