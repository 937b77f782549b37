#include "dissd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dissd/errors.hpp"

namespace dissd {

double soft_threshold(double x, double lambda) {
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

Vector hard_threshold(const Vector& v, double tau) {
  Vector out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= tau) out[i] = v[i];
  }
  return out;
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm1(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const Vector& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

std::size_t support_size(const Vector& v) {
  std::size_t k = 0;
  for (double x : v) {
    if (x != 0.0) ++k;
  }
  return k;
}

std::vector<std::size_t> support(const Vector& v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) idx.push_back(i);
  }
  return idx;
}

Vector SymMatrix::multiply(const Vector& x) const {
  Vector y(p_, 0.0);
  const double* a = a_.data();
  std::size_t k = 0;
  for (std::size_t i = 0; i < p_; ++i) {
    double acc = 0.0;
    const double xi = x[i];
    for (std::size_t j = 0; j < i; ++j, ++k) {
      const double v = a[k];
      acc += v * x[j];
      y[j] += v * xi;
    }
    acc += a[k] * xi;  // diagonal
    ++k;
    y[i] += acc;
  }
  return y;
}

std::vector<double> SymMatrix::dense() const {
  std::vector<double> d(p_ * p_);
  for (std::size_t i = 0; i < p_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = (*this)(i, j);
      d[i * p_ + j] = v;
      d[j * p_ + i] = v;
    }
  }
  return d;
}

SymMatrix empirical_second_moment(const std::vector<Vector>& rows) {
  if (rows.empty()) throw NumericalError("empirical_second_moment: no rows");
  const std::size_t p = rows.front().size();
  for (const Vector& r : rows) {
    if (r.size() != p) {
      throw NumericalError("empirical_second_moment: inconsistent row lengths");
    }
  }
  SymMatrix m(p);
  double* a = m.packed().data();
  for (const Vector& r : rows) {
    const double* x = r.data();
    std::size_t k = 0;
    for (std::size_t i = 0; i < p; ++i) {
      const double xi = x[i];
      for (std::size_t j = 0; j <= i; ++j, ++k) a[k] += xi * x[j];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (double& v : m.packed()) v *= inv_n;
  return m;
}

namespace {

bool try_factor(const SymMatrix& m, double shift, CholeskyFactor* out) {
  const std::size_t p = m.dim();
  out->p = p;
  out->lower.assign(p * p, 0.0);
  double* L = out->lower.data();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m(i, j) + (i == j ? shift : 0.0);
      for (std::size_t k = 0; k < j; ++k) s -= L[i * p + k] * L[j * p + k];
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) return false;
        L[i * p + i] = std::sqrt(s);
      } else {
        L[i * p + j] = s / L[j * p + j];
      }
    }
  }
  out->row_start.assign(p, 0);
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t s = 0;
    while (s < i && L[i * p + s] == 0.0) ++s;
    out->row_start[i] = s;
  }
  return true;
}

}  // namespace

Vector CholeskyFactor::apply(const Vector& z) const {
  Vector x(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t j = row_start[i]; j <= i; ++j) s += lower[i * p + j] * z[j];
    x[i] = s;
  }
  return x;
}

Vector CholeskyFactor::solve(const Vector& b) const {
  Vector y(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    double s = b[i];
    for (std::size_t j = row_start[i]; j < i; ++j) s -= lower[i * p + j] * y[j];
    y[i] = s / lower[i * p + i];
  }
  Vector x(p, 0.0);
  for (std::size_t ii = p; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < p; ++j) s -= lower[j * p + ii] * x[j];
    x[ii] = s / lower[ii * p + ii];
  }
  return x;
}

CholeskyFactor cholesky(const SymMatrix& m, double jitter) {
  CholeskyFactor f;
  if (try_factor(m, 0.0, &f)) return f;
  if (jitter > 0.0) {
    for (double scale : {1.0, 100.0, 10000.0}) {
      if (try_factor(m, jitter * scale, &f)) return f;
    }
  }
  throw NumericalError("cholesky: matrix is not positive definite");
}

SymMatrix invert_spd(const SymMatrix& m, double jitter) {
  const CholeskyFactor f = cholesky(m, jitter);
  const std::size_t p = m.dim();
  SymMatrix inv(p);
  Vector e(p, 0.0);
  for (std::size_t l = 0; l < p; ++l) {
    e[l] = 1.0;
    const Vector col = f.solve(e);
    e[l] = 0.0;
    for (std::size_t i = l; i < p; ++i) inv.set(i, l, col[i]);
  }
  return inv;
}

}  // namespace dissd
