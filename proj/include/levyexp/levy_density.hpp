#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace levyexp {

namespace detail {
class DensityImpl;
}

// Absolutely continuous Levy measure on (0, inf) with density f.
// Builtin families carry closed-form tails and inverse tails, which the
// jump samplers use directly; tabulated and custom densities fall back to
// quadrature.
class LevyDensity {
 public:
  // f(r) = lambda * rho * exp(-rho r); total mass lambda.
  static LevyDensity exponential_jump(double lambda, double rho);

  // f(r) = exp(-r/alpha) / (Gamma(1-alpha) (1 - exp(-r/alpha))^{alpha+1}),
  // alpha in (0,1). Infinite activity, f(r) ~ const * r^{-1-alpha} near 0.
  static LevyDensity stable_example(double alpha);

  // f(r) = (1-alpha)^2 exp(r/alpha) /
  //        (alpha Gamma(alpha+1) (exp(r/alpha) - 1)^{2-alpha}).
  static LevyDensity dual_example(double alpha);

  // Monotone piecewise-linear interpolation in log-log space; both ends
  // extrapolated at the nearest observed log-slope.
  static LevyDensity tabulated(std::vector<double> abscissae,
                               std::vector<double> values);

  // Function-backed density (used for transform-reconstructed measures).
  // log_value is required; the optional callables override the numeric
  // fallbacks.
  static LevyDensity custom(std::function<double(double)> log_value,
                            std::function<double(double)> neg_log_derivative,
                            std::function<double(double)> tail,
                            std::string description);

  double value(double r) const;
  double log_value(double r) const;

  // -(d/dr) log f(r); >= 0 exactly when f is non-increasing.
  double neg_log_derivative(double r) const;

  // f'(r) = -f(r) * neg_log_derivative(r).
  double derivative(double r) const;

  // Integral of f over (r, inf).
  double tail(double r) const;

  // Smallest r with tail(r) = mass (tail is strictly decreasing).
  double inverse_tail(double mass) const;
  bool has_closed_inverse_tail() const;

  // Integral of s f(s) over (0, eps]: drift replacing discarded jumps.
  double small_jump_drift(double eps) const;

  // Integral of (1 ^ r) f(r) dr; finite for a valid Levy measure.
  double one_wedge_mass() const;

  // True when f is non-increasing on a log-spaced grid of n points.
  bool decreasing_on_grid(int n = 200, double lo = 1e-6, double hi = 1e3) const;

  const std::string& describe() const;

 private:
  explicit LevyDensity(std::shared_ptr<const detail::DensityImpl> impl);
  std::shared_ptr<const detail::DensityImpl> impl_;
};

}  // namespace levyexp
