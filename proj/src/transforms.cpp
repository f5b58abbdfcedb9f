#include "levyexp/transforms.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "levyexp/quadrature.hpp"

namespace levyexp {

namespace {

double log_sum_exp(double a, double b) {
  if (a < b) {
    std::swap(a, b);
  }
  if (!std::isfinite(a)) {
    return a;
  }
  return a + std::log1p(std::exp(b - a));
}

void cross_check(const std::function<double(double)>& algebraic,
                 const std::function<double(double)>& measure_route,
                 const std::string& what) {
  for (double u = 0.5; u <= 10.0 + 1e-9; u += 0.5) {
    const double a = algebraic(u);
    const double b = measure_route(u);
    const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
    if (std::abs(a - b) > 1e-5 * scale) {
      std::ostringstream msg;
      msg << what << ": evaluator disagreement at u=" << u
          << " (algebraic " << a << ", reconstructed " << b << ")";
      throw TransformError(msg.str());
    }
  }
}

void require_valid(const ValidationReport& issues, const std::string& what) {
  if (issues.empty()) {
    return;
  }
  std::ostringstream msg;
  msg << what << ": input exponent fails validation:";
  for (const auto& issue : issues) {
    msg << " [" << issue.invariant << ": " << issue.detail << "]";
  }
  throw TransformError(msg.str());
}

}  // namespace

SNExponent theorem1_forward(const SubordinatorExponent& phi) {
  require_valid(validate(phi), "theorem1_forward");

  const double sigma = phi.drift();
  const double mean = phi(1.0);
  const double at_minus_one = -phi(0.0);

  std::optional<SpectralJumpMeasure> jump;
  if (phi.density()) {
    // Pi(dr) = e^{r}(f(-r)dr - df(-r)); for piecewise-C^1 f this is the
    // density e^{-s}(f(s) + (-f')(s)) in depth coordinates, with tail
    // Pi(-inf,-s) = e^{-s} f(s).
    const LevyDensity f = *phi.density();
    jump.emplace(
        [f](double s) {
          return -s + f.log_value(s) + std::log1p(f.neg_log_derivative(s));
        },
        [f](double s) { return -s + f.log_value(s); },
        std::vector<SpectralAtom>{},
        "forward-of(" + f.describe() + ")");
  }

  auto phi_copy = phi;
  auto algebraic = [phi_copy](double u) { return u * phi_copy(u + 1.0); };

  SNExponent psi1 = SNExponent::with_algebraic(
      sigma, mean, std::move(jump), at_minus_one, algebraic,
      "theorem1-forward(" + phi.label() + ")");

  cross_check(algebraic,
              [&psi1](double u) { return psi1.eval_levy_khintchine(u); },
              "theorem1_forward");
  return psi1;
}

SubordinatorExponent theorem1_converse(const SNExponent& psi) {
  require_valid(validate(psi), "theorem1_converse");
  if (!psi.analytic_at_minus_one()) {
    throw TransformError("theorem1_converse: psi not analytic at -1");
  }
  if (!(psi.mean() > 0.0)) {
    throw TransformError("theorem1_converse: requires m > 0");
  }
  const double at_minus_one = psi.value_at_minus_one();
  if (at_minus_one > 1e-12) {
    throw TransformError(
        "theorem1_converse: psi(-1) > 0 would give a negative killing rate");
  }
  if (psi.jump() && !psi.jump()->atoms().empty()) {
    throw TransformError(
        "theorem1_converse: jump measures with atoms are not supported");
  }

  const double drift = psi.sigma();
  const double killing = std::max(0.0, -at_minus_one);

  std::optional<LevyDensity> density;
  if (psi.jump()) {
    // f(r) = e^{r} Pi(-inf, -r); log f = r + log tail.
    const SpectralJumpMeasure pi = *psi.jump();
    auto log_value = [pi](double r) { return r + std::log(pi.tail(r)); };
    auto neg_log_d = [pi](double r) {
      // -(log f)' = pi(r)/T(r) - 1.
      return pi.density(r) / pi.tail(r) - 1.0;
    };
    density = LevyDensity::custom(log_value, neg_log_d, nullptr,
                                  "tail-derived(" + pi.describe() + ")");
  }

  auto psi_copy = psi;
  const double mean = psi.mean();
  auto algebraic = [psi_copy, mean](double u) {
    if (std::abs(u - 1.0) < 1e-12) {
      return mean;
    }
    return psi_copy(u - 1.0) / (u - 1.0);
  };

  SubordinatorExponent phi_minus = SubordinatorExponent::with_algebraic(
      drift, killing, std::move(density), algebraic,
      "theorem1-converse(" + psi.label() + ")");

  cross_check(algebraic,
              [&phi_minus](double u) {
                return phi_minus.eval_levy_khintchine(u);
              },
              "theorem1_converse");
  return phi_minus;
}

SNExponent prop1_transform(const SNExponent& psi) {
  require_valid(validate(psi), "prop1_transform");
  if (psi.mean() < 0.0) {
    throw TransformError("prop1_transform: requires m >= 0");
  }
  const double mean = psi(1.0);
  if (!(mean > 0.0)) {
    throw TransformError("prop1_transform: psi(1) must be positive");
  }

  std::optional<SpectralJumpMeasure> jump;
  if (psi.jump()) {
    const SpectralJumpMeasure pi = *psi.jump();
    std::vector<SpectralAtom> atoms;
    for (const auto& a : pi.atoms()) {
      atoms.push_back({a.depth, std::exp(-a.depth) * a.mass});
    }
    const bool closed_tail = pi.has_closed_tail() && pi.atoms().empty();
    std::function<double(double)> log_tail2;
    if (closed_tail) {
      log_tail2 = [pi](double s) { return -s + std::log(pi.tail(s)); };
    }
    std::function<double(double)> log_density2;
    if (closed_tail) {
      log_density2 = [pi](double s) {
        return -s + log_sum_exp(std::log(pi.tail(s)), pi.log_density(s));
      };
    } else {
      log_density2 = [pi](double s) {
        return -s + std::log(pi.tail(s) + pi.density(s));
      };
    }
    jump.emplace(std::move(log_density2), std::move(log_tail2),
                 std::move(atoms), "prop1-of(" + pi.describe() + ")");
  }

  auto psi_copy = psi;
  auto algebraic = [psi_copy](double u) {
    return u / (u + 1.0) * psi_copy(u + 1.0);
  };

  SNExponent psi2 = SNExponent::with_algebraic(
      psi.sigma(), mean, std::move(jump), -psi.mean(), algebraic,
      "prop1(" + psi.label() + ")");

  cross_check(algebraic,
              [&psi2](double u) { return psi2.eval_levy_khintchine(u); },
              "prop1_transform");
  return psi2;
}

BernsteinDual special_bernstein_dual(const SubordinatorExponent& phi) {
  for (double u : {1e-3, 0.1, 0.5, 1.0, 5.0, 20.0}) {
    if (!(phi(u) > 0.0)) {
      throw TransformError("special_bernstein_dual: phi must be positive on (0,inf)");
    }
  }
  auto phi_copy = phi;
  auto dual = [phi_copy](double u) { return u / phi_copy(u); };

  BernsteinDual out;
  out.evaluator = dual;
  out.alternating_check_passed = true;

  // Finite-difference Bernstein check: phi-hat' >= 0, phi-hat'' <= 0,
  // phi-hat''' >= 0, phi-hat'''' <= 0 on a coarse grid. Reported only.
  const double h = 0.25;
  for (double x = 1.0; x <= 8.0 + 1e-9; x += 0.5) {
    const double fm2 = dual(x - 2 * h), fm1 = dual(x - h), f0 = dual(x),
                 fp1 = dual(x + h), fp2 = dual(x + 2 * h);
    const double tol = 1e-6 * std::max(1.0, std::abs(f0));
    const double d1 = (fp1 - fm1) / (2 * h);
    const double d2 = (fp1 - 2 * f0 + fm1) / (h * h);
    const double d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
    const double d4 = (fp2 - 4 * fp1 + 6 * f0 - 4 * fm1 + fm2) / (h * h * h * h);
    const bool ok = d1 >= -tol && d2 <= tol && d3 >= -tol && d4 <= tol;
    if (!ok) {
      out.alternating_check_passed = false;
      std::ostringstream note;
      note << "sign pattern broken at u=" << x << " (d1=" << d1 << ", d2=" << d2
           << ", d3=" << d3 << ", d4=" << d4 << ")";
      out.notes.push_back(note.str());
    }
  }
  return out;
}

}  // namespace levyexp
