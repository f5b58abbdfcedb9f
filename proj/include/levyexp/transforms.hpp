#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyexp/exponents.hpp"

namespace levyexp {

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Maps a subordinator exponent phi (whose Levy density is monotone
// decreasing and piecewise-C^1) to the spectrally negative exponent
//   psi1(u) = u phi(u+1),
// with sigma = b, linear coefficient phi(1), jump density
// e^{-s}(f(s) - f'(s)) in depth coordinates and psi1(-1) = -phi(0).
// Construction cross-checks the reconstructed Levy data against the
// algebraic evaluator on u in {0.5, 1, ..., 10} (1e-5 relative) and fails
// on disagreement.
SNExponent theorem1_forward(const SubordinatorExponent& phi);

// Converse map: for psi analytic at -1 with psi(-1) <= 0 and m > 0,
//   phi_{-1}(u) = psi(u-1)/(u-1)   (limit m at u = 1),
// realized as the subordinator with b = sigma, q = -psi(-1) and the
// tail-derived density f(r) = e^{r} Pi(-inf, -r). Inputs whose jump
// measure carries atoms are rejected.
SubordinatorExponent theorem1_converse(const SNExponent& psi);

// psi2(u) = u/(u+1) psi(u+1): same sigma, linear coefficient psi(1), jump
// measure e^{r}(Pi(-inf, r) dr + Pi(dr)); mean psi(1) > 0 required.
SNExponent prop1_transform(const SNExponent& psi);

struct BernsteinDual {
  std::function<double(double)> evaluator;  // u -> u / phi(u)
  // Finite-difference derivatives of orders 1..4 alternate in sign on the
  // check grid (reported, not enforced).
  bool alternating_check_passed;
  std::vector<std::string> notes;
};

// Dual exponent u/phi(u) of a special Bernstein function candidate.
// Rejects phi vanishing somewhere on (0, inf).
BernsteinDual special_bernstein_dual(const SubordinatorExponent& phi);

}  // namespace levyexp
