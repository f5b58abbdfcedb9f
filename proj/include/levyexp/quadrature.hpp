#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace levyexp {

// Raised when an adaptive integral fails to converge (refinement
// disagreement), which is how divergent integrals are detected.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

// Adaptive Gauss-Kronrod (7,15) on the finite interval [a, b].
// Endpoints are never evaluated (all nodes are interior).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opt = {});

// Integral of f over [a, inf), a > -inf, by geometric blocks
// [a, a+w], [a+w, a+3w], ... each integrated adaptively; stops when a
// block contributes less than the tolerance relative to the running sum.
// Throws QuadratureError when the blocks do not decay (divergence).
double integrate_right_tail(const std::function<double(double)>& f, double a,
                            const QuadOptions& opt = {});

// Integral of g over (-inf, b]: fixed-width blocks marching left, same
// decay-based stopping rule. Intended for integrands already transformed
// to a log variable, which decay exponentially.
double integrate_left_tail(const std::function<double(double)>& g, double b,
                           const QuadOptions& opt = {});

}  // namespace levyexp
