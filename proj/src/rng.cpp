#include "levyexp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace levyexp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RngState::RngState(std::uint64_t seed)
    : seed_(seed), gen_(splitmix64(seed)) {}

RngState RngState::substream(std::uint64_t replica) const {
  return RngState(splitmix64(seed_) ^ ((replica + 1) * kGolden));
}

double RngState::uniform() {
  for (;;) {
    // 53 random bits mapped to [0,1); reject exact zero to stay in (0,1).
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    if (u > 0.0) {
      return u;
    }
  }
}

double RngState::exponential() { return -std::log(uniform()); }

double RngState::normal() {
  for (;;) {
    const double a = 2.0 * uniform() - 1.0;
    const double b = 2.0 * uniform() - 1.0;
    const double s = a * a + b * b;
    if (s > 0.0 && s < 1.0) {
      return a * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

double RngState::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::domain_error("gamma: shape must be > 0");
  }
  if (shape < 1.0) {
    // Boost: G(a) = G(a+1) U^{1/a}.
    return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

double RngState::positive_stable(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("positive_stable: alpha must be in (0,1)");
  }
  // Kanter's representation: S = (A(pi U)/W)^{(1-alpha)/alpha} with
  //   A(x) = [sin(alpha x)^alpha sin((1-alpha) x)^{1-alpha} / sin(x)]^{1/(1-alpha)}.
  const double u = uniform() * M_PI;
  const double w = exponential();
  const double log_a =
      (alpha * std::log(std::sin(alpha * u)) +
       (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * u)) -
       std::log(std::sin(u))) /
      (1.0 - alpha);
  return std::exp((1.0 - alpha) / alpha * (log_a - std::log(w)));
}

}  // namespace levyexp
