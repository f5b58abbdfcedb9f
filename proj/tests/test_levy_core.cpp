#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "levyexp/exponents.hpp"
#include "levyexp/quadrature.hpp"
#include "levyexp/specfun.hpp"

using namespace levyexp;

namespace {

SubordinatorExponent stable_family(double alpha) {
  // Killing 1/Gamma(1-alpha) makes phi equal the Gamma-ratio closed form.
  return SubordinatorExponent(0.0, 1.0 / gamma_fn(1.0 - alpha),
                              LevyDensity::stable_example(alpha));
}

double stable_closed_form(double alpha, double u) {
  // Gamma(alpha u + 1) / Gamma(alpha (u-1) + 1)
  return std::exp(log_gamma(alpha * u + 1.0) -
                  log_gamma(alpha * (u - 1.0) + 1.0));
}

}  // namespace

TEST_CASE("eval_phi: pure drift and pure killing") {
  SubordinatorExponent drift(1.0, 0.0, std::nullopt);
  CHECK(eval_phi(drift, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  SubordinatorExponent killed(0.0, 0.7, std::nullopt);
  CHECK(eval_phi(killed, 0.0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK_THROWS_AS(eval_phi(drift, -1.0), std::domain_error);
}

TEST_CASE("eval_phi: exponential-jump closed form lambda u/(u+rho)") {
  SubordinatorExponent phi(0.0, 0.0, LevyDensity::exponential_jump(1.0, 1.0));
  for (double u : {0.5, 1.0, 2.0, 7.5}) {
    CHECK(eval_phi(phi, u) == doctest::Approx(u / (u + 1.0)).epsilon(1e-9));
  }
  SubordinatorExponent phi2(0.25, 0.1, LevyDensity::exponential_jump(2.0, 3.0));
  for (double u : {0.5, 4.0}) {
    CHECK(eval_phi(phi2, u) ==
          doctest::Approx(0.25 * u + 0.1 + 2.0 * u / (u + 3.0)).epsilon(1e-9));
  }
}

TEST_CASE("eval_phi: stable example matches the Gamma-ratio closed form") {
  // The quadrature oracle fixes the global constant: with the killing rate
  // included, phi equals the closed form itself, i.e. (1/alpha) times the
  // alpha-scaled variant. The ratio must be flat in u to 1e-6.
  for (double alpha : {0.3, 0.5, 0.7}) {
    SubordinatorExponent phi = stable_family(alpha);
    double ratio_ref = 0.0;
    for (double u = 0.5; u <= 10.0; u += 0.5) {
      const double ratio = eval_phi(phi, u) / stable_closed_form(alpha, u);
      if (ratio_ref == 0.0) {
        ratio_ref = ratio;
      }
      CHECK(std::abs(ratio / ratio_ref - 1.0) < 1e-6);
    }
    CHECK(ratio_ref == doctest::Approx(1.0).epsilon(1e-6));
  }
  // Spec example at u = 1, alpha = 0.5: c * Gamma(3/2) * (1/2) with c = 1/alpha.
  SubordinatorExponent phi = stable_family(0.5);
  CHECK(eval_phi(phi, 1.0) ==
        doctest::Approx(2.0 * gamma_fn(1.5) * 0.5).epsilon(1e-8));
}

TEST_CASE("eval_phi: dual example integrates to (1-alpha) u Gamma-ratio") {
  for (double alpha : {0.3, 0.5}) {
    SubordinatorExponent phi(0.0, 0.0, LevyDensity::dual_example(alpha));
    for (double u : {1.0, 2.0, 5.0}) {
      const double closed =
          (1.0 - alpha) * u *
          std::exp(log_gamma(alpha * (u - 1.0) + 1.0) -
                   log_gamma(alpha * u + 1.0));
      CHECK(eval_phi(phi, u) == doctest::Approx(closed).epsilon(1e-8));
    }
  }
}

TEST_CASE("levy_tail: exponential-jump anchors and additivity") {
  LevyDensity f = LevyDensity::exponential_jump(2.0, 1.0);
  CHECK(levy_tail(f, 1e-12) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(levy_tail(f, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-10));
  CHECK(levy_tail(f, 80.0) < 1e-30);
  // tail(r0) = tail(r) + int_{r0}^{r} f
  const double r0 = 0.3, r = 2.2;
  const double mid = integrate([&f](double s) { return f.value(s); }, r0, r);
  CHECK(levy_tail(f, r0) ==
        doctest::Approx(levy_tail(f, r) + mid).epsilon(1e-8));
  CHECK_THROWS_AS(levy_tail(f, 0.0), std::domain_error);
}

TEST_CASE("levy_tail: stable and dual closed forms match quadrature") {
  for (double alpha : {0.3, 0.7}) {
    LevyDensity f = LevyDensity::stable_example(alpha);
    LevyDensity g = LevyDensity::dual_example(alpha);
    for (double r : {0.05, 0.7, 3.0}) {
      const double fq =
          integrate_right_tail([&f](double s) { return f.value(s); }, r);
      CHECK(f.tail(r) == doctest::Approx(fq).epsilon(1e-8));
      const double gq =
          integrate_right_tail([&g](double s) { return g.value(s); }, r);
      CHECK(g.tail(r) == doctest::Approx(gq).epsilon(1e-8));
    }
  }
}

TEST_CASE("inverse_tail inverts tail for every family") {
  for (const LevyDensity& f :
       {LevyDensity::exponential_jump(1.5, 2.0), LevyDensity::stable_example(0.5),
        LevyDensity::dual_example(0.4)}) {
    for (double r : {0.01, 0.5, 2.0}) {
      const double mass = f.tail(r);
      CHECK(f.inverse_tail(mass) == doctest::Approx(r).epsilon(1e-9));
    }
  }
}

TEST_CASE("small_jump_drift against quadrature") {
  LevyDensity f = LevyDensity::exponential_jump(2.0, 1.5);
  const double eps = 0.37;
  const double q = integrate([&f](double r) { return r * f.value(r); },
                             1e-12, eps);
  CHECK(f.small_jump_drift(eps) == doctest::Approx(q).epsilon(1e-8));
  LevyDensity g = LevyDensity::stable_example(0.5);
  const double qg = integrate([&g](double r) { return r * g.value(r); },
                              1e-14, 0.2);
  CHECK(g.small_jump_drift(0.2) == doctest::Approx(qg).epsilon(1e-6));
}

TEST_CASE("eval_psi: quadratic family and zero at zero") {
  SNExponent psi = brownian_drift(1.0, 1.0);
  CHECK(eval_psi(psi, 2.0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(eval_psi(psi, 0.0) == 0.0);
  CHECK(psi.analytic_at_minus_one());
  CHECK(psi.value_at_minus_one() == doctest::Approx(0.0));
}

TEST_CASE("eval_psi: brownian with exponential jumps closed form") {
  // psi(u) = sigma u^2 + m u + lambda u^2 / (rho (u + rho))
  const double sigma = 0.5, m = 1.5, lambda = 0.5, rho = 2.0;
  SNExponent psi = brownian_exponential_jumps(sigma, m, lambda, rho);
  for (double u : {0.5, 1.0, 3.0, 10.0}) {
    const double closed = sigma * u * u + m * u + lambda * u * u / (rho * (u + rho));
    CHECK(eval_psi(psi, u) == doctest::Approx(closed).epsilon(1e-8));
  }
  CHECK(psi.analytic_at_minus_one());
  CHECK(psi.value_at_minus_one() ==
        doctest::Approx(sigma - m + lambda / (rho * (rho - 1.0))).epsilon(1e-10));
  // Continuation below 0 agrees with the closed form too.
  const double um = -0.5;
  const double closed_m =
      sigma * um * um + m * um + lambda * um * um / (rho * (um + rho));
  CHECK(psi.eval_levy_khintchine(um) == doctest::Approx(closed_m).epsilon(1e-8));
}

TEST_CASE("eval_psi: domain guard for negative u without analyticity") {
  SNExponent psi = brownian_exponential_jumps(0.5, 1.5, 0.5, 0.8);
  CHECK(!psi.analytic_at_minus_one());
  CHECK_THROWS_AS(eval_psi(psi, -0.5), std::domain_error);
}

TEST_CASE("eval_psi handles atoms") {
  // Single downward jump of size 2 with rate 0.25, compensated.
  SpectralJumpMeasure jump(
      [](double) { return -std::numeric_limits<double>::infinity(); }, nullptr,
      {{2.0, 0.25}}, "single atom");
  SNExponent psi(0.0, 1.0, jump, std::nullopt, "atom test");
  for (double u : {0.5, 1.0, 2.0}) {
    const double expected = u + 0.25 * (std::exp(-2.0 * u) - 1.0 + 2.0 * u);
    CHECK(eval_psi(psi, u) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("validate: clean families produce no issues") {
  CHECK(validate(SubordinatorExponent(1.0, 0.0, std::nullopt)).empty());
  CHECK(validate(stable_family(0.5)).empty());
  CHECK(validate(SubordinatorExponent(0.0, 0.0,
                                      LevyDensity::exponential_jump(1.0, 1.0)))
            .empty());
  CHECK(validate(brownian_drift(1.0, 1.0)).empty());
  CHECK(validate(brownian_exponential_jumps(0.5, 1.5, 0.5, 2.0)).empty());
}

TEST_CASE("validate: flags negative parameters and non-monotone densities") {
  const auto bad_drift = validate(SubordinatorExponent(-1.0, 0.0, std::nullopt));
  REQUIRE(!bad_drift.empty());
  CHECK(bad_drift.front().invariant == "b >= 0");

  // Tabulated density with an increasing segment.
  LevyDensity bumpy = LevyDensity::tabulated({0.1, 1.0, 2.0, 10.0},
                                             {1.0, 0.5, 0.8, 0.01});
  const auto issues =
      validate(SubordinatorExponent(0.0, 0.0, bumpy));
  bool found = false;
  for (const auto& issue : issues) {
    if (issue.invariant == "density monotone decreasing") {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("tabulated density reproduces a power law exactly") {
  // f(r) = r^{-3/2} / (2 sqrt(pi)) gives phi(u) = sqrt(u); log-log linear
  // interpolation is exact for a pure power law.
  const double c = 0.5 / std::sqrt(M_PI);
  std::vector<double> r, f;
  for (double x = 1e-8; x <= 1.1e8; x *= 10.0) {
    r.push_back(x);
    f.push_back(c * std::pow(x, -1.5));
  }
  LevyDensity tab = LevyDensity::tabulated(r, f);
  CHECK(tab.value(3.7) == doctest::Approx(c * std::pow(3.7, -1.5)).epsilon(1e-12));
  SubordinatorExponent phi(0.0, 0.0, tab);
  for (double u : {0.5, 1.0, 4.0}) {
    CHECK(eval_phi(phi, u) == doctest::Approx(std::sqrt(u)).epsilon(1e-5));
  }
}
