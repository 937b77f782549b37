#ifndef DISSD_LINALG_HPP
#define DISSD_LINALG_HPP

#include <cstddef>
#include <vector>

namespace dissd {

using Vector = std::vector<double>;

// --- elementwise shrinkage -------------------------------------------------

// sign(x) * max(|x| - lambda, 0)
double soft_threshold(double x, double lambda);

// Keeps entry l when |v_l| >= tau (ties kept), zeroes it otherwise.
Vector hard_threshold(const Vector& v, double tau);

// --- small vector helpers ---------------------------------------------------

double dot(const Vector& a, const Vector& b);
double norm1(const Vector& v);
double norm2(const Vector& v);
double norm_inf(const Vector& v);
// max_l |a_l - b_l|
double max_abs_diff(const Vector& a, const Vector& b);
std::size_t support_size(const Vector& v);
std::vector<std::size_t> support(const Vector& v);

// --- symmetric matrices -----------------------------------------------------

// Dense symmetric matrix storing only the lower triangle (row-packed), so
// symmetry is structural: writing (i,j) and (j,i) touch the same slot.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t p) : p_(p), a_(p * (p + 1) / 2, 0.0) {}

  std::size_t dim() const { return p_; }

  double operator()(std::size_t i, std::size_t j) const { return a_[idx(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { a_[idx(i, j)] = v; }
  void add(std::size_t i, std::size_t j, double v) { a_[idx(i, j)] += v; }

  // y = M x
  Vector multiply(const Vector& x) const;

  // Full row-major p*p copy; the coordinate solvers want contiguous rows.
  std::vector<double> dense() const;

  const std::vector<double>& packed() const { return a_; }
  std::vector<double>& packed() { return a_; }

 private:
  static std::size_t idx(std::size_t i, std::size_t j) {
    if (i < j) { const std::size_t t = i; i = j; j = t; }
    return i * (i + 1) / 2 + j;
  }

  std::size_t p_ = 0;
  std::vector<double> a_;
};

// (1/n) * sum_i x_i x_i' — uncentered, divided by the row count.
// Throws NumericalError("no rows") on empty input.
SymMatrix empirical_second_moment(const std::vector<Vector>& rows);

// --- Cholesky ----------------------------------------------------------------

// Lower-triangular factor L with M = L L'. row_start[i] is the first nonzero
// column of row i, so block/banded factors apply in O(bandwidth) per row.
struct CholeskyFactor {
  std::size_t p = 0;
  std::vector<double> lower;           // row-major p*p, upper part zero
  std::vector<std::size_t> row_start;

  Vector apply(const Vector& z) const;  // L z
  Vector solve(const Vector& b) const;  // (L L')^{-1} b
};

// Throws NumericalError when the matrix is not positive definite. When
// jitter > 0 the factorization is retried with jitter (then 100x, 10000x)
// added to the diagonal before giving up.
CholeskyFactor cholesky(const SymMatrix& m, double jitter = 0.0);

// Dense SPD inverse via Cholesky solves, returned in symmetric storage.
SymMatrix invert_spd(const SymMatrix& m, double jitter = 0.0);

}  // namespace dissd

#endif  // DISSD_LINALG_HPP
