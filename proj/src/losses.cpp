#include "dissd/losses.hpp"

#include <cmath>

#include "dissd/errors.hpp"

namespace dissd {

MEstLoss huber_loss(double delta) {
  if (delta <= 0.0) throw ConfigError("huber_loss: delta must be positive");
  MEstLoss loss;
  loss.name = "huber";
  loss.value = [delta](double x) {
    const double a = std::abs(x);
    return a <= delta ? 0.5 * x * x : delta * a - 0.5 * delta * delta;
  };
  loss.first_deriv = [delta](double x) {
    if (x > delta) return delta;
    if (x < -delta) return -delta;
    return x;
  };
  loss.second_deriv = [delta](double x) { return std::abs(x) <= delta ? 1.0 : 0.0; };
  loss.is_smooth = true;
  loss.curvature_bound = 1.0;
  return loss;
}

MEstLoss absolute_loss() {
  MEstLoss loss;
  loss.name = "absolute";
  loss.value = [](double x) { return 0.5 * std::abs(x); };
  loss.first_deriv = [](double x) { return x <= 0.0 ? -0.5 : 0.5; };
  loss.second_deriv = [](double) { return 0.0; };
  loss.discontinuities = {{0.0, 1.0}};
  loss.is_smooth = false;
  // No honest Lipschitz bound exists for a jump; 1.0 sizes the subgradient
  // proximal step and the backtracking line search keeps iterations monotone.
  loss.curvature_bound = 1.0;
  return loss;
}

MEstLoss square_loss() {
  MEstLoss loss;
  loss.name = "square";
  loss.value = [](double x) { return 0.5 * x * x; };
  loss.first_deriv = [](double x) { return x; };
  loss.second_deriv = [](double) { return 1.0; };
  loss.is_smooth = true;
  loss.curvature_bound = 1.0;
  return loss;
}

GlmLink logistic_link(double psi2_floor) {
  GlmLink link;
  link.name = "logistic";
  link.psi = [](double x) {
    // log(1 + e^x); for large x the direct form overflows, so switch branches.
    return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  };
  link.psi1 = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  link.psi2 = [](double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 - s);
  };
  link.psi3 = [](double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 - s) * (1.0 - 2.0 * s);
  };
  link.psi2_floor = psi2_floor;
  link.curvature_bound = 0.25;
  return link;
}

Kernel biweight_kernel() {
  Kernel k;
  k.name = "biweight";
  k.eval = [](double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    const double x2 = x * x;
    return ((-315.0 / 64.0 * x2 + 735.0 / 64.0) * x2 - 525.0 / 64.0) * x2 + 105.0 / 64.0;
  };
  k.support_radius = 1.0;
  return k;
}

}  // namespace dissd
