#include "dissd/inference.hpp"

#include <cmath>

#include "dissd/errors.hpp"

namespace dissd {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Acklam's coefficients for the inverse normal CDF.
double acklam(double u) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (u > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double inv_normal_cdf(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw ConfigError("inv_normal_cdf: argument must lie in (0,1)");
  }
  double x = acklam(u);
  // One Halley refinement against the exact CDF.
  const double e = normal_cdf(x) - u;
  const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
  const double g = e / phi;
  x -= g / (1.0 + 0.5 * x * g);
  return x;
}

double sigma_mest(std::size_t l, const PrecisionEstimate& precision,
                  double h_hat, const std::vector<double>& residual_grads) {
  if (std::abs(h_hat) < 1e-8) {
    throw NumericalError("sigma_mest: curvature estimate too close to zero");
  }
  if (residual_grads.empty()) {
    throw NumericalError("sigma_mest: no residual gradients supplied");
  }
  double s = 0.0;
  for (double g : residual_grads) s += g * g;
  s /= static_cast<double>(residual_grads.size());
  return s / (h_hat * h_hat) * precision.diag(l);
}

namespace {

double weighted_quadratic_form(const Vector& omega_row,
                               const std::vector<Vector>& rows, const Vector& beta,
                               const GlmLink& link, double* count) {
  double s = 0.0;
  for (const Vector& x : rows) {
    const double proj = dot(omega_row, x);
    const double w2 = std::max(link.psi2(dot(x, beta)), link.psi2_floor);
    s += proj * proj / w2;
  }
  *count += static_cast<double>(rows.size());
  return s;
}

}  // namespace

double sigma_glm(std::size_t l, const PrecisionEstimate& precision,
                 const Cluster& cluster, const Vector& beta,
                 const GlmLink& link) {
  const Vector& omega_row = precision.rows[l];
  double count = 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < cluster.machines(); ++j) {
    s += weighted_quadratic_form(omega_row, cluster.shard(j).x, beta, link,
                                 &count);
  }
  return s / count;
}

double sigma_glm(std::size_t l, const PrecisionEstimate& precision,
                 const std::vector<Vector>& covariates, const Vector& beta,
                 const GlmLink& link) {
  double count = 0.0;
  const double s = weighted_quadratic_form(precision.rows[l], covariates, beta,
                                           link, &count);
  return s / count;
}

Interval confidence_interval(double beta_bar_l, double sigma2_l,
                             std::size_t mn, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("confidence_interval: level must lie in (0,1)");
  }
  const double z = inv_normal_cdf(0.5 * (1.0 + level));
  const double half = z * std::sqrt(sigma2_l / static_cast<double>(mn));
  return {beta_bar_l - half, beta_bar_l + half};
}

}  // namespace dissd
