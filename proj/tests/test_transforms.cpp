#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "levyexp/exponents.hpp"
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

TEST_CASE("forward: pure drift gives u^2 + u") {
  SNExponent psi1 = theorem1_forward(SubordinatorExponent(1.0, 0.0, std::nullopt));
  CHECK(psi1(1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(psi1(3.0) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(psi1.sigma() == 1.0);
  CHECK(psi1.mean() == doctest::Approx(1.0));
  CHECK(psi1.analytic_at_minus_one());
  CHECK(psi1.value_at_minus_one() == doctest::Approx(0.0));
}

TEST_CASE("forward: pure killing gives q u") {
  SNExponent psi1 = theorem1_forward(SubordinatorExponent(0.0, 0.4, std::nullopt));
  CHECK(psi1(2.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(psi1.sigma() == 0.0);
  CHECK(psi1.value_at_minus_one() == doctest::Approx(-0.4));
}

TEST_CASE("forward: exponential-jump density transforms pointwise") {
  // pi(r) = lambda rho (1+rho) e^{(1+rho) r} for r < 0; in depth coordinates
  // the density is lambda rho (1+rho) e^{-(1+rho) s}.
  const double lambda = 1.0, rho = 1.0;
  SNExponent psi1 = theorem1_forward(exp_jump_family());
  REQUIRE(psi1.jump().has_value());
  for (double s : {0.1, 0.5, 1.0, 3.0}) {
    const double expected = lambda * rho * (1.0 + rho) * std::exp(-(1.0 + rho) * s);
    CHECK(psi1.jump()->density(s) == doctest::Approx(expected).epsilon(1e-12));
  }
  // Tail of the reconstructed measure: e^{-s} f(s) = lambda rho e^{-(1+rho)s}.
  for (double s : {0.2, 1.0}) {
    CHECK(psi1.jump()->tail(s) ==
          doctest::Approx(lambda * rho * std::exp(-(1.0 + rho) * s)).epsilon(1e-12));
  }
}

TEST_CASE("forward: algebraic and measure routes agree for all families") {
  for (const auto& phi :
       {exp_jump_family(), stable_family(0.5), stable_family(0.3),
        SubordinatorExponent(0.0, 0.0, LevyDensity::dual_example(0.5)),
        SubordinatorExponent(0.2, 0.1, LevyDensity::exponential_jump(2.0, 3.0))}) {
    SNExponent psi1 = theorem1_forward(phi);
    for (double u = 0.5; u <= 10.0; u += 1.0) {
      CHECK(psi1.eval_levy_khintchine(u) ==
            doctest::Approx(u * phi(u + 1.0)).epsilon(1e-5));
    }
    // positive mean (psi1'(0+) = phi(1) > 0)
    CHECK(psi1.mean() > 0.0);
    CHECK(validate(psi1).empty());
  }
}

TEST_CASE("forward rejects a non-monotone density") {
  LevyDensity bumpy =
      LevyDensity::tabulated({0.1, 1.0, 2.0, 10.0}, {1.0, 0.5, 0.8, 0.01});
  CHECK_THROWS_AS(theorem1_forward(SubordinatorExponent(0.0, 0.0, bumpy)),
                  TransformError);
}

TEST_CASE("converse: brownian case recovers the drift subordinator") {
  SubordinatorExponent phi = theorem1_converse(brownian_drift(1.0, 1.0));
  CHECK(phi.drift() == doctest::Approx(1.0));
  CHECK(phi.killing() == doctest::Approx(0.0));
  for (double u : {0.0, 0.5, 1.0, 2.0, 7.0}) {
    CHECK(phi(u) == doctest::Approx(u).epsilon(1e-10));
  }
}

TEST_CASE("converse: killing recovery q = -psi(-1)") {
  SNExponent psi = brownian_exponential_jumps(0.5, 1.5, 0.5, 2.0);
  SubordinatorExponent phi = theorem1_converse(psi);
  CHECK(phi.killing() == doctest::Approx(-psi.value_at_minus_one()).epsilon(1e-10));
  CHECK(phi(0.0) == doctest::Approx(-psi.value_at_minus_one()).epsilon(1e-8));
}

TEST_CASE("converse rejects bad inputs") {
  // psi(-1) > 0: brownian drift with sigma > m.
  CHECK_THROWS_AS(theorem1_converse(brownian_drift(2.0, 1.0)), TransformError);
  // Not analytic at -1 (rho <= 1).
  CHECK_THROWS_AS(theorem1_converse(brownian_exponential_jumps(0.5, 1.5, 0.5, 0.9)),
                  TransformError);
  // m = 0.
  CHECK_THROWS_AS(theorem1_converse(SNExponent(1.0, 0.0, std::nullopt, 1.0, "")),
                  TransformError);
}

TEST_CASE("roundtrip converse(forward(phi)) reproduces phi") {
  for (const auto& phi :
       {exp_jump_family(), stable_family(0.5),
        SubordinatorExponent(0.3, 0.2, LevyDensity::exponential_jump(1.5, 2.0))}) {
    SNExponent psi1 = theorem1_forward(phi);
    SubordinatorExponent back = theorem1_converse(psi1);
    for (double u = 0.0; u <= 10.0; u += 0.5) {
      const double scale = std::max(1.0, std::abs(phi(u)));
      CHECK(std::abs(back(u) - phi(u)) <= 1e-5 * scale);
    }
    // The measure route of the roundtrip also matches the original.
    for (double u : {0.5, 2.0, 6.5}) {
      const double scale = std::max(1.0, std::abs(phi.eval_levy_khintchine(u)));
      CHECK(std::abs(back.eval_levy_khintchine(u) -
                     phi.eval_levy_khintchine(u)) <= 1e-5 * scale);
    }
  }
}

TEST_CASE("roundtrip recovers the exponential-jump density pointwise") {
  // f_{-1}(r) = e^{r} Pi1(-inf,-r) = lambda rho e^{-rho r} = f(r).
  SNExponent psi1 = theorem1_forward(exp_jump_family());
  SubordinatorExponent back = theorem1_converse(psi1);
  REQUIRE(back.density().has_value());
  for (double r : {0.1, 0.7, 2.0}) {
    CHECK(back.density()->value(r) ==
          doctest::Approx(std::exp(-r)).epsilon(1e-9));
  }
}

TEST_CASE("prop1: fixed point and pure-quadratic shift") {
  SNExponent id = brownian_drift(0.0, 1.0);  // psi(u) = u
  SNExponent p = prop1_transform(id);
  for (double u : {0.5, 1.0, 5.0}) {
    CHECK(p(u) == doctest::Approx(u).epsilon(1e-12));
  }
  SNExponent sq = brownian_drift(1.0, 0.0);  // psi(u) = u^2, m = 0 allowed
  SNExponent p2 = prop1_transform(sq);
  CHECK(p2.mean() == doctest::Approx(1.0));
  for (double u : {0.5, 2.0}) {
    CHECK(p2(u) == doctest::Approx(u * u + u).epsilon(1e-12));
  }
}

TEST_CASE("prop1: measure route, mean positivity, minus-one value") {
  for (const auto& psi :
       {theorem1_forward(exp_jump_family()), theorem1_forward(stable_family(0.5)),
        brownian_exponential_jumps(0.5, 1.5, 0.5, 2.0),
        brownian_drift(1.0, 1.0)}) {
    SNExponent psi2 = prop1_transform(psi);
    CHECK(psi2.mean() == doctest::Approx(psi(1.0)).epsilon(1e-12));
    CHECK(psi2.mean() > 0.0);
    CHECK(psi2.analytic_at_minus_one());
    CHECK(psi2.value_at_minus_one() == doctest::Approx(-psi.mean()).epsilon(1e-10));
    for (double u = 0.5; u <= 10.0; u += 1.0) {
      CHECK(psi2.eval_levy_khintchine(u) ==
            doctest::Approx(u / (u + 1.0) * psi(u + 1.0)).epsilon(1e-5));
    }
  }
}

TEST_CASE("prop1 for the stable family matches the closed form") {
  // With the resolved constant, psi2(u) = u Gamma(a(u+2)+1)/Gamma(a(u+1)+1),
  // which is 1/alpha times the alpha-scaled variant.
  const double alpha = 0.5;
  SNExponent psi2 = prop1_transform(theorem1_forward(stable_family(alpha)));
  for (double u : {0.5, 1.0, 2.0, 4.0}) {
    const double closed = u * std::exp(log_gamma(alpha * (u + 2.0) + 1.0) -
                                       log_gamma(alpha * (u + 1.0) + 1.0));
    CHECK(psi2(u) == doctest::Approx(closed).epsilon(1e-7));
  }
  // Spec's alpha-scaled value at u=1, times 1/alpha.
  CHECK(psi2(1.0) == doctest::Approx(0.6646701941 / alpha).epsilon(1e-7));
}

TEST_CASE("prop1 maps atoms through e^{r} scaling") {
  SpectralJumpMeasure jump(
      [](double) { return -std::numeric_limits<double>::infinity(); }, nullptr,
      {{2.0, 0.25}}, "single atom");
  SNExponent psi(0.0, 1.0, jump, -0.5, "atom test");
  SNExponent psi2 = prop1_transform(psi);
  REQUIRE(psi2.jump().has_value());
  REQUIRE(psi2.jump()->atoms().size() == 1);
  CHECK(psi2.jump()->atoms()[0].depth == doctest::Approx(2.0));
  CHECK(psi2.jump()->atoms()[0].mass ==
        doctest::Approx(0.25 * std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("converse rejects atom-bearing jump measures") {
  SpectralJumpMeasure jump(
      [](double) { return -std::numeric_limits<double>::infinity(); }, nullptr,
      {{2.0, 0.25}}, "single atom");
  SNExponent psi(0.0, 1.0, jump, -0.5, "atom test");
  CHECK_THROWS_AS(theorem1_converse(psi), TransformError);
}

TEST_CASE("special_bernstein_dual: self-dual anchors") {
  SubordinatorExponent linear(1.0, 0.0, std::nullopt);  // phi(u) = u
  BernsteinDual dual = special_bernstein_dual(linear);
  for (double u : {0.3, 1.0, 9.0}) {
    CHECK(dual.evaluator(u) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(dual.alternating_check_passed);

  // phi(u) = sqrt(u) through the tabulated 1/2-stable density.
  const double c = 0.5 / std::sqrt(M_PI);
  std::vector<double> r, f;
  for (double x = 1e-8; x <= 1.1e8; x *= 10.0) {
    r.push_back(x);
    f.push_back(c * std::pow(x, -1.5));
  }
  SubordinatorExponent half(0.0, 0.0, LevyDensity::tabulated(r, f));
  BernsteinDual dual_half = special_bernstein_dual(half);
  for (double u : {0.5, 1.0, 4.0}) {
    CHECK(dual_half.evaluator(u) == doctest::Approx(std::sqrt(u)).epsilon(1e-4));
  }
  CHECK(dual_half.alternating_check_passed);
}

TEST_CASE("special_bernstein_dual: stable pair multiplies to u") {
  // With the resolved constant the true dual of the killed stable family is
  // exactly the printed dual form u Gamma(a(u-1)+1)/Gamma(au+1).
  const double alpha = 0.5;
  SubordinatorExponent phi = stable_family(alpha);
  BernsteinDual dual = special_bernstein_dual(phi);
  for (double u = 0.5; u <= 10.0; u += 0.5) {
    const double dual_closed =
        u * std::exp(log_gamma(alpha * (u - 1.0) + 1.0) -
                     log_gamma(alpha * u + 1.0));
    CHECK(dual.evaluator(u) == doctest::Approx(dual_closed).epsilon(1e-6));
  }
  CHECK(dual.alternating_check_passed);
}
