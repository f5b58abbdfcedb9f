#include "levyexp/moments.hpp"

#include <algorithm>
#include <cmath>

#include "levyexp/specfun.hpp"

namespace levyexp {

namespace {

void check_order(int N) {
  if (N < 1 || N > kMaxMomentOrder) {
    throw std::invalid_argument("moment order must be in 1.." +
                                std::to_string(kMaxMomentOrder));
  }
}

}  // namespace

double MomentSequence::log_value(int n) const {
  if (n < 1 || n > max_order()) {
    throw std::out_of_range("MomentSequence: order out of range");
  }
  return log_values[static_cast<std::size_t>(n) - 1];
}

double MomentSequence::value(int n) const { return std::exp(log_value(n)); }

MomentSequence expfun_pos_moments(const SubordinatorExponent& phi, int N) {
  check_order(N);
  MomentSequence seq{MomentSource::PositiveEntire, {}, phi.label()};
  seq.log_values.reserve(static_cast<std::size_t>(N));
  double log_prod = 0.0;
  for (int k = 1; k <= N; ++k) {
    const double value = phi(static_cast<double>(k));
    if (!(value > 0.0)) {
      throw DegenerateExponentError("expfun_pos_moments: phi(" +
                                    std::to_string(k) + ") = " +
                                    std::to_string(value));
    }
    log_prod += std::log(value);
    seq.log_values.push_back(log_gamma(k + 1.0) - log_prod);
  }
  return seq;
}

MomentSequence expfun_neg_moments(const SNExponent& psi, int N) {
  check_order(N);
  if (!(psi.mean() > 0.0)) {
    throw DegenerateExponentError(
        "expfun_neg_moments: requires a positive mean");
  }
  MomentSequence seq{MomentSource::NegativeEntire, {}, psi.label()};
  seq.log_values.reserve(static_cast<std::size_t>(N));
  const double log_mean = std::log(psi.mean());
  double log_prod = 0.0;  // prod_{k=1}^{n-1} psi(k)
  for (int n = 1; n <= N; ++n) {
    if (n > 1) {
      const double value = psi(static_cast<double>(n - 1));
      if (!(value > 0.0)) {
        throw DegenerateExponentError("expfun_neg_moments: psi(" +
                                      std::to_string(n - 1) + ") <= 0");
      }
      log_prod += std::log(value);
    }
    seq.log_values.push_back(log_mean + log_prod - log_gamma(n));
  }
  return seq;
}

MomentSequence entrance_moments(const SNExponent& psi, int N) {
  check_order(N);
  MomentSequence seq{MomentSource::Entrance, {}, psi.label()};
  seq.log_values.reserve(static_cast<std::size_t>(N));
  double log_prod = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double value = psi(static_cast<double>(n));
    if (!(value > 0.0)) {
      throw DegenerateExponentError("entrance_moments: psi(" +
                                    std::to_string(n) + ") <= 0");
    }
    log_prod += std::log(value);
    seq.log_values.push_back(log_prod - log_gamma(n + 1.0));
  }
  return seq;
}

std::vector<double> factorization_check_analytic(const SubordinatorExponent& phi,
                                                 int N) {
  const MomentSequence seq = expfun_pos_moments(phi, N);
  std::vector<double> residuals;
  residuals.reserve(static_cast<std::size_t>(N));
  double log_prod = 0.0;
  for (int n = 1; n <= N; ++n) {
    log_prod += std::log(phi(static_cast<double>(n)));
    // | exp(log E[I^n] + log prod - log Gamma(n+1)) - 1 |
    const double log_ratio = seq.log_value(n) + log_prod - log_gamma(n + 1.0);
    residuals.push_back(std::abs(std::expm1(log_ratio)));
  }
  return residuals;
}

bool hankel_psd_check(const MomentSequence& seq) {
  if (seq.max_order() < 4) {
    throw std::invalid_argument("hankel_psd_check: needs orders up to 4");
  }
  const double s1 = seq.value(1), s2 = seq.value(2), s3 = seq.value(3),
               s4 = seq.value(4);
  const double det2 = s2 - s1 * s1;
  const double scale2 = std::max({1.0, s1 * s1, s2});
  if (det2 < -1e-8 * scale2) {
    return false;
  }
  const double det3 = s2 * s4 - s3 * s3 - s1 * (s1 * s4 - s2 * s3) +
                      s2 * (s1 * s3 - s2 * s2);
  double scale3 = std::max({1.0, s4, s2 * s4, std::abs(s3 * s3)});
  scale3 = std::max(scale3, s2 * s2 * s2);
  if (det3 < -1e-8 * scale3) {
    return false;
  }
  return true;
}

}  // namespace levyexp
