#include "dissd/scio.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "dissd/errors.hpp"
#include "dissd/parallel.hpp"

namespace dissd {

Vector PrecisionEstimate::apply(const Vector& g) const {
  Vector out(rows.size());
  for (std::size_t l = 0; l < rows.size(); ++l) out[l] = dot(rows[l], g);
  return out;
}

namespace {

// State for one row problem over the dense (row-major) matrix S.
struct RowSolver {
  const double* S;
  std::size_t p;
  std::size_t l;
  double lambda;
  Vector w;
  Vector q;  // S w, maintained incrementally

  RowSolver(const double* S, std::size_t p, std::size_t l, double lambda)
      : S(S), p(p), l(l), lambda(lambda), w(p, 0.0), q(p, 0.0) {}

  double update_coord(std::size_t j) {
    const double sjj = S[j * p + j];
    const double old = w[j];
    double next;
    if (sjj <= 1e-300) {
      next = 0.0;  // zero-variance coordinate stays out
    } else {
      const double c = q[j] - sjj * old;
      const double target = (j == l ? 1.0 : 0.0) - c;
      next = soft_threshold(target, lambda) / sjj;
    }
    const double delta = next - old;
    if (delta != 0.0) {
      w[j] = next;
      const double* Sj = S + j * p;
      for (std::size_t i = 0; i < p; ++i) q[i] += delta * Sj[i];
    }
    return std::abs(delta);
  }

  double sweep_all() {
    double dmax = 0.0;
    for (std::size_t j = 0; j < p; ++j) dmax = std::max(dmax, update_coord(j));
    return dmax;
  }

  double sweep_active(const std::vector<std::size_t>& active) {
    double dmax = 0.0;
    for (std::size_t j : active) dmax = std::max(dmax, update_coord(j));
    return dmax;
  }

  // Recomputes q from scratch over the support, flushing drift accumulated by
  // the incremental updates.
  void refresh_product() {
    q.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      const double wj = w[j];
      if (wj == 0.0) continue;
      const double* Sj = S + j * p;
      for (std::size_t i = 0; i < p; ++i) q[i] += wj * Sj[i];
    }
  }

  // Worst violation of the subgradient conditions, with q assumed fresh.
  double kkt_violation() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double r = q[j] - (j == l ? 1.0 : 0.0);
      double v;
      if (w[j] > 0.0) {
        v = std::abs(r + lambda);
      } else if (w[j] < 0.0) {
        v = std::abs(r - lambda);
      } else {
        v = std::max(std::abs(r) - lambda, 0.0);
      }
      worst = std::max(worst, v);
    }
    return worst;
  }

  double gradient_residual() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      worst = std::max(worst, std::abs(q[j] - (j == l ? 1.0 : 0.0)));
    }
    return worst;
  }
};

}  // namespace

namespace {

Vector solve_row(const double* S, std::size_t p, std::size_t l, double lambda,
                 double tol, std::size_t max_sweeps, double* out_residual) {
  RowSolver solver(S, p, l, lambda);

  const double inner_tol = std::max(tol * 1e-2, 1e-14);
  std::size_t sweeps = 0;
  while (sweeps < max_sweeps) {
    double dmax = solver.sweep_all();
    ++sweeps;
    if (norm_inf(solver.w) > 1e8) {
      throw ConvergenceError(
          "scio_row: iterate diverging (objective unbounded below; increase lambda)",
          solver.w, solver.gradient_residual());
    }
    // Work the current support until it settles, then re-check globally.
    if (dmax > inner_tol) {
      std::vector<std::size_t> active = support(solver.w);
      while (sweeps < max_sweeps && !active.empty()) {
        const double d = solver.sweep_active(active);
        ++sweeps;
        if (d <= inner_tol) break;
      }
    }
    solver.refresh_product();
    if (solver.kkt_violation() <= tol) {
      if (out_residual) *out_residual = solver.gradient_residual();
      return solver.w;
    }
  }
  solver.refresh_product();
  throw ConvergenceError("scio_row: no convergence after " +
                             std::to_string(max_sweeps) + " sweeps",
                         solver.w, solver.gradient_residual());
}

}  // namespace

Vector scio_row(const SymMatrix& sigma_hat, std::size_t l, double lambda,
                double tol, std::size_t max_sweeps) {
  if (lambda < 0.0) throw ConfigError("scio_row: lambda must be nonnegative");
  if (l >= sigma_hat.dim()) throw ConfigError("scio_row: row index out of range");
  const std::vector<double> dense = sigma_hat.dense();
  return solve_row(dense.data(), sigma_hat.dim(), l, lambda, tol, max_sweeps,
                   nullptr);
}

PrecisionEstimate scio_full(const std::vector<Vector>& covariates,
                            double lambda_scale, const ScioOptions& opts) {
  if (covariates.size() < 2) {
    throw ConfigError("scio_full: need at least 2 covariate rows");
  }
  const SymMatrix sigma_hat = empirical_second_moment(covariates);
  const std::size_t p = sigma_hat.dim();
  const double n_rows = static_cast<double>(covariates.size());
  const double lambda = lambda_scale * std::sqrt(std::log(double(p)) / n_rows);

  const std::vector<double> dense = sigma_hat.dense();

  PrecisionEstimate est;
  est.rows.resize(p);
  est.lambdas.assign(p, lambda);
  est.kkt_residuals.assign(p, 0.0);

  std::vector<std::exception_ptr> errors(p);
  parallel_for(p, opts.threads, [&](std::size_t l) {
    try {
      est.rows[l] = solve_row(dense.data(), p, l, lambda, opts.tol,
                              opts.max_sweeps, &est.kkt_residuals[l]);
    } catch (...) {
      errors[l] = std::current_exception();
    }
  });
  for (std::size_t l = 0; l < p; ++l) {
    if (!errors[l]) continue;
    try {
      std::rethrow_exception(errors[l]);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("scio_full: row " + std::to_string(l + 1) + ": " +
                                 e.what(),
                             e.last_iterate, e.residual);
    }
  }
  return est;
}

PrecisionEstimate exact_precision(const SymMatrix& sigma) {
  const SymMatrix inv = invert_spd(sigma, 1e-12);
  const std::size_t p = sigma.dim();
  PrecisionEstimate est;
  est.rows.resize(p, Vector(p));
  est.lambdas.assign(p, 0.0);
  est.kkt_residuals.assign(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) est.rows[i][j] = inv(i, j);
  }
  return est;
}

}  // namespace dissd
