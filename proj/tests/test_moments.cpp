#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "levyexp/moments.hpp"
#include "levyexp/specfun.hpp"
#include "levyexp/transforms.hpp"

using namespace levyexp;

namespace {

SubordinatorExponent stable_family(double alpha) {
  return SubordinatorExponent(0.0, 1.0 / gamma_fn(1.0 - alpha),
                              LevyDensity::stable_example(alpha));
}

SubordinatorExponent exp_jump_family() {
  return SubordinatorExponent(0.0, 0.0, LevyDensity::exponential_jump(1.0, 1.0));
}

}  // namespace

TEST_CASE("positive moments: first order is 1/phi(1)") {
  SubordinatorExponent phi = exp_jump_family();
  MomentSequence seq = expfun_pos_moments(phi, 3);
  CHECK(seq.value(1) == doctest::Approx(1.0 / phi(1.0)).epsilon(1e-10));
}

TEST_CASE("positive moments: exponential-jump second moment is 6") {
  // phi(k) = k/(k+1), so E[I^2] = Gamma(3)/((1/2)(2/3)) = 6; quadrature phi.
  MomentSequence seq = expfun_pos_moments(exp_jump_family(), 2);
  CHECK(seq.value(2) == doctest::Approx(6.0).epsilon(1e-7));
}

TEST_CASE("positive moments: stable family matches Gamma(n+1)/Gamma(an+1)") {
  for (double alpha : {0.3, 0.5, 0.7}) {
    MomentSequence seq = expfun_pos_moments(stable_family(alpha), 8);
    for (int n = 1; n <= 8; ++n) {
      const double expected =
          std::exp(log_gamma(n + 1.0) - log_gamma(alpha * n + 1.0));
      CHECK(seq.value(n) == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("positive moments reject degenerate exponents") {
  SubordinatorExponent zero(0.0, 0.0, std::nullopt);
  CHECK_THROWS_AS(expfun_pos_moments(zero, 2), DegenerateExponentError);
  CHECK_THROWS_AS(expfun_pos_moments(exp_jump_family(), 21),
                  std::invalid_argument);
}

TEST_CASE("negative moments of u^2 + u") {
  SNExponent psi = brownian_drift(1.0, 1.0);
  MomentSequence seq = expfun_neg_moments(psi, 3);
  CHECK(seq.value(1) == doctest::Approx(1.0).epsilon(1e-12));   // m
  CHECK(seq.value(2) == doctest::Approx(2.0).epsilon(1e-12));   // m psi(1)/1!
  CHECK(seq.value(3) == doctest::Approx(6.0).epsilon(1e-12));   // psi(1)psi(2)/2!
}

TEST_CASE("negative moments require a positive mean") {
  CHECK_THROWS_AS(expfun_neg_moments(brownian_drift(1.0, 0.0), 2),
                  DegenerateExponentError);
}

TEST_CASE("negative moments of the forward transform give prod phi(k)") {
  for (const auto& phi : {exp_jump_family(), stable_family(0.5)}) {
    SNExponent psi1 = theorem1_forward(phi);
    MomentSequence neg = expfun_neg_moments(psi1, 10);
    double log_prod = 0.0;
    for (int n = 1; n <= 10; ++n) {
      log_prod += std::log(phi(static_cast<double>(n)));
      CHECK(std::abs(neg.log_value(n) - log_prod) <= 1e-10);
    }
  }
}

TEST_CASE("entrance moments: psi(u) = u gives the constant law 1") {
  MomentSequence seq = entrance_moments(brownian_drift(0.0, 1.0), 6);
  for (int n = 1; n <= 6; ++n) {
    CHECK(seq.value(n) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("entrance moments: first order is psi(1)") {
  SNExponent psi = brownian_drift(1.0, 1.0);
  CHECK(entrance_moments(psi, 1).value(1) == doctest::Approx(psi(1.0)));
}

TEST_CASE("entrance equals negative moments of prop1 transform, order by order") {
  for (const auto& psi :
       {brownian_drift(1.0, 1.0), theorem1_forward(exp_jump_family()),
        theorem1_forward(stable_family(0.5)),
        brownian_exponential_jumps(0.5, 1.5, 0.5, 2.0)}) {
    MomentSequence lhs = entrance_moments(psi, 10);
    MomentSequence rhs = expfun_neg_moments(prop1_transform(psi), 10);
    for (int n = 1; n <= 10; ++n) {
      CHECK(std::abs(lhs.log_value(n) - rhs.log_value(n)) <=
            1e-10 * std::max(1.0, std::abs(lhs.log_value(n))));
    }
  }
}

TEST_CASE("factorization residuals vanish in log space") {
  for (const auto& phi : {exp_jump_family(), stable_family(0.3),
                          stable_family(0.5), stable_family(0.7)}) {
    const auto residuals = factorization_check_analytic(phi, 10);
    REQUIRE(residuals.size() == 10);
    for (double r : residuals) {
      CHECK(r <= 1e-12);
    }
  }
}

TEST_CASE("hankel positivity for all builtin families") {
  CHECK(hankel_psd_check(expfun_pos_moments(exp_jump_family(), 4)));
  CHECK(hankel_psd_check(expfun_pos_moments(stable_family(0.3), 4)));
  CHECK(hankel_psd_check(expfun_pos_moments(stable_family(0.7), 4)));
  CHECK(hankel_psd_check(
      expfun_pos_moments(SubordinatorExponent(1.0, 0.0, std::nullopt), 4)));
  CHECK(hankel_psd_check(
      expfun_neg_moments(brownian_drift(1.0, 1.0), 4)));
  CHECK(hankel_psd_check(
      entrance_moments(brownian_exponential_jumps(0.5, 1.5, 0.5, 2.0), 4)));
}
