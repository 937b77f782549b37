#ifndef DISSD_LOSSES_HPP
#define DISSD_LOSSES_HPP

#include <functional>
#include <string>
#include <vector>

namespace dissd {

// A jump of the first derivative: gap = f'(x+) - f'(x-) at `location`.
struct Discontinuity {
  double location;
  double gap;
};

// Descriptor of a residual loss f for M-estimation. second_deriv is defined
// almost everywhere, with an explicit value at jump points of first_deriv.
// The shipped losses all have an even second derivative and jumps only at 0,
// which is what lets gradients use the residual x'beta - y while curvature
// estimates remain valid; a future asymmetric loss would need to revisit the
// residual orientation.
struct MEstLoss {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> first_deriv;
  std::function<double(double)> second_deriv;
  std::vector<Discontinuity> discontinuities;
  bool is_smooth = true;      // first_deriv continuous on all of R
  double curvature_bound = 1.0;  // step-sizing Lipschitz bound for first_deriv
};

// Quadratic center |x| <= delta, linear tails. Throws ConfigError if delta <= 0.
MEstLoss huber_loss(double delta);

// f(x) = |x|/2, f'(x) = 1/2 - I(x <= 0), f'' defined as 0 everywhere.
MEstLoss absolute_loss();

// f(x) = x^2/2
MEstLoss square_loss();

// Link descriptor for GLM losses: psi and its first three derivatives, plus
// the clip level applied to psi'' wherever it appears in a denominator.
struct GlmLink {
  std::string name;
  std::function<double(double)> psi;
  std::function<double(double)> psi1;
  std::function<double(double)> psi2;
  std::function<double(double)> psi3;
  double psi2_floor = 0.01;
  double curvature_bound = 0.25;  // sup psi''
};

// psi(x) = log(1 + e^x), computed overflow-safely.
GlmLink logistic_link(double psi2_floor = 0.01);

// Compactly supported smoothing kernel, zero outside [-radius, radius].
struct Kernel {
  std::string name;
  std::function<double(double)> eval;
  double support_radius = 1.0;
};

// Degree-6 polynomial kernel on [-1,1] integrating to one.
Kernel biweight_kernel();

}  // namespace dissd

#endif  // DISSD_LOSSES_HPP
