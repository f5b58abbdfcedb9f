#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "levyexp/exponents.hpp"

namespace levyexp {

struct DegenerateExponentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MomentSource { PositiveEntire, NegativeEntire, Entrance };

// Log-space moment sequence with its provenance. Order n lives at
// log_values[n-1].
struct MomentSequence {
  MomentSource source;
  std::vector<double> log_values;
  std::string exponent_label;

  int max_order() const { return static_cast<int>(log_values.size()); }
  double log_value(int n) const;
  double value(int n) const;
};

inline constexpr int kMaxMomentOrder = 20;

// E[I^n] = Gamma(n+1) / prod_{k=1..n} phi(k), n = 1..N (N <= 20).
MomentSequence expfun_pos_moments(const SubordinatorExponent& phi, int N);

// E[I^{-n}] = m prod_{k=1..n-1} psi(k) / Gamma(n); requires m > 0.
MomentSequence expfun_neg_moments(const SNExponent& psi, int N);

// E[J^n] = prod_{k=1..n} psi(k) / Gamma(n+1); requires psi(k) > 0.
MomentSequence entrance_moments(const SNExponent& psi, int N);

// Relative residuals |E[I^n] prod phi(k) - Gamma(n+1)| / Gamma(n+1),
// computed in log space; tests numeric plumbing of the factorization.
std::vector<double> factorization_check_analytic(const SubordinatorExponent& phi,
                                                 int N);

// Positive semidefiniteness of the 2x2 and 3x3 Hankel matrices built from
// (1, s1, ..., s4); tolerance -1e-8 relative to the entry scale.
bool hankel_psd_check(const MomentSequence& seq);

}  // namespace levyexp
