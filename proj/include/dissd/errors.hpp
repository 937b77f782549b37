#ifndef DISSD_ERRORS_HPP
#define DISSD_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace dissd {

// Bad user input: unknown keys, invalid ranges, incompatible model/noise.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (divergence, degenerate curvature, non-PD matrix).
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Solver gave up; carries the last iterate and its stationarity residual so
// callers can report or inspect the failure.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                   double residual)
      : NumericalError(what),
        last_iterate(std::move(last_iterate)),
        residual(residual) {}

  std::vector<double> last_iterate;
  double residual;
};

}  // namespace dissd

#endif  // DISSD_ERRORS_HPP
