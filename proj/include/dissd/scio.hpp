#ifndef DISSD_SCIO_HPP
#define DISSD_SCIO_HPP

#include <cstddef>
#include <vector>

#include "dissd/linalg.hpp"

namespace dissd {

// Row-sparse estimate of the inverse second-moment matrix, built row by row.
// Rows are used as-is in debias steps (no symmetrization).
struct PrecisionEstimate {
  std::vector<Vector> rows;   // p rows, rows[l] estimates the l-th row
  Vector lambdas;             // l1 level per row
  Vector kkt_residuals;       // max_j |Sigma w - e_l|_inf at return, per row

  std::size_t dim() const { return rows.size(); }
  double diag(std::size_t l) const { return rows[l][l]; }

  // (Omega g)_l = rows[l] . g
  Vector apply(const Vector& g) const;
};

struct ScioOptions {
  double tol = 1e-7;             // stationarity residual target
  std::size_t max_sweeps = 10000;
  int threads = 1;
};

// Minimizes 0.5 w' S w - e_l' w + lambda |w|_1 by cyclic coordinate descent
// with active-set sweeps and an incrementally maintained S w product. The
// returned point satisfies the subgradient conditions within tol; otherwise a
// ConvergenceError carries the last iterate and its residual.
Vector scio_row(const SymMatrix& sigma_hat, std::size_t l, double lambda,
                double tol = 1e-7, std::size_t max_sweeps = 10000);

// Builds the second-moment matrix over the supplied covariate rows (master:
// labeled + unlabeled), sets lambda_l = lambda_scale * sqrt(log p / n_rows)
// uniformly, and solves every row independently (rows are parallel; output is
// gathered in row order).
PrecisionEstimate scio_full(const std::vector<Vector>& covariates,
                            double lambda_scale, const ScioOptions& opts = {});

// Exact inverse wrapped in the same estimate type (lambdas zero); used where
// an oracle precision matrix is wanted.
PrecisionEstimate exact_precision(const SymMatrix& sigma);

}  // namespace dissd

#endif  // DISSD_SCIO_HPP
