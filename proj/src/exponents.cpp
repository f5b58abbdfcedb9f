#include "levyexp/exponents.hpp"

#include <cmath>
#include <stdexcept>

#include "levyexp/quadrature.hpp"

namespace levyexp {

namespace {

// log of (1 - e^{-z}) for z = exp(log_z) > 0, stable for any magnitude.
double log_one_minus_exp_neg(double log_z) {
  if (log_z < -30.0) {
    return log_z;  // 1 - e^{-z} = z to double precision
  }
  const double z = std::exp(log_z);
  if (z > 700.0) {
    return 0.0;
  }
  return std::log(-std::expm1(-z));
}

// log of (e^{-z} - 1 + z), the compensated-jump weight, for z > 0.
double log_compensated_weight(double log_z) {
  if (log_z < -9.0) {
    const double z = std::exp(log_z);
    return 2.0 * log_z - M_LN2 + std::log1p(-z / 3.0 + z * z / 12.0);
  }
  const double z = std::exp(log_z);
  return std::log(std::expm1(-z) + z);  // = log(z - 1) once e^{-z} underflows
}

// log of (e^{z} - 1 - z) for z > 0 (analytic continuation side, u < 0).
double log_compensated_weight_neg(double log_z) {
  if (log_z < -9.0) {
    const double z = std::exp(log_z);
    return 2.0 * log_z - M_LN2 + std::log1p(z / 3.0 + z * z / 12.0);
  }
  const double z = std::exp(log_z);
  if (z > 30.0) {
    return z;  // e^z dominates; relative error below (1+z)e^{-z}
  }
  return std::log(std::expm1(z) - z);
}

}  // namespace

// ---------------------------------------------------------------------------
// SubordinatorExponent

SubordinatorExponent::SubordinatorExponent(double drift, double killing,
                                           std::optional<LevyDensity> density)
    : drift_(drift), killing_(killing), density_(std::move(density)) {
  if (!std::isfinite(drift) || !std::isfinite(killing)) {
    throw std::invalid_argument("SubordinatorExponent: non-finite parameters");
  }
  label_ = "subordinator(b=" + std::to_string(drift_) +
           ",q=" + std::to_string(killing_) +
           (density_ ? "," + density_->describe() : "") + ")";
}

SubordinatorExponent SubordinatorExponent::with_algebraic(
    double drift, double killing, std::optional<LevyDensity> density,
    std::function<double(double)> algebraic, std::string label) {
  SubordinatorExponent e(drift, killing, std::move(density));
  e.algebraic_ = std::move(algebraic);
  e.label_ = std::move(label);
  return e;
}

double SubordinatorExponent::operator()(double u) const {
  if (algebraic_) {
    return algebraic_(u);
  }
  return eval_levy_khintchine(u);
}

double SubordinatorExponent::eval_levy_khintchine(double u) const {
  if (u < 0.0) {
    throw std::domain_error("eval_phi: u must be >= 0");
  }
  double value = drift_ * u + killing_;
  if (density_ && u > 0.0) {
    const LevyDensity& f = *density_;
    const double log_u = std::log(u);
    // (0, 1]: t = log r, integrand (1 - e^{-ur}) f(r) r assembled in logs.
    const double low = integrate_left_tail(
        [&f, log_u](double t) {
          return std::exp(log_one_minus_exp_neg(log_u + t) + f.log_value(std::exp(t)) +
                          t);
        },
        0.0);
    // [1, inf): direct, geometric blocks.
    const double high = integrate_right_tail(
        [&f, u](double r) {
          return -std::expm1(-u * r) * std::exp(f.log_value(r));
        },
        1.0);
    value += low + high;
  }
  return value;
}

double eval_phi(const SubordinatorExponent& exponent, double u) {
  if (u < 0.0) {
    throw std::domain_error("eval_phi: u must be >= 0");
  }
  return exponent(u);
}

// ---------------------------------------------------------------------------
// SpectralJumpMeasure

SpectralJumpMeasure::SpectralJumpMeasure(
    std::function<double(double)> log_density,
    std::function<double(double)> log_tail, std::vector<SpectralAtom> atoms,
    std::string description)
    : log_density_(std::move(log_density)), log_tail_(std::move(log_tail)),
      atoms_(std::move(atoms)), label_(std::move(description)) {
  if (!log_density_) {
    throw std::invalid_argument("SpectralJumpMeasure: log_density required");
  }
  for (const auto& a : atoms_) {
    if (!(a.depth > 0.0) || !(a.mass > 0.0)) {
      throw std::invalid_argument("SpectralJumpMeasure: invalid atom");
    }
  }
}

double SpectralJumpMeasure::log_density(double s) const { return log_density_(s); }
double SpectralJumpMeasure::density(double s) const {
  return std::exp(log_density_(s));
}

double SpectralJumpMeasure::tail(double s) const {
  double t;
  if (log_tail_) {
    t = std::exp(log_tail_(s));
  } else {
    const auto& ld = log_density_;
    t = integrate_right_tail(
        [&ld](double v) { return std::exp(ld(v)); }, s);
  }
  for (const auto& a : atoms_) {
    if (a.depth > s) {
      t += a.mass;
    }
  }
  return t;
}

double SpectralJumpMeasure::abs_moment_beyond(double eps) const {
  const auto& ld = log_density_;
  double m = integrate_right_tail(
      [&ld](double s) { return s * std::exp(ld(s)); }, eps);
  for (const auto& a : atoms_) {
    if (a.depth >= eps) {
      m += a.depth * a.mass;
    }
  }
  return m;
}

double SpectralJumpMeasure::second_moment_within(double eps) const {
  const auto& ld = log_density_;
  double m = integrate_left_tail(
      [&ld](double t) {
        return std::exp(ld(std::exp(t)) + 3.0 * t);  // s^2 * s dt
      },
      std::log(eps));
  for (const auto& a : atoms_) {
    if (a.depth < eps) {
      m += a.depth * a.depth * a.mass;
    }
  }
  return m;
}

double SpectralJumpMeasure::wedge_mass() const {
  return second_moment_within(1.0) + abs_moment_beyond(1.0);
}

// ---------------------------------------------------------------------------
// SNExponent

SNExponent::SNExponent(double sigma, double mean,
                       std::optional<SpectralJumpMeasure> jump,
                       std::optional<double> value_at_minus_one,
                       std::string label)
    : sigma_(sigma), mean_(mean), jump_(std::move(jump)),
      psi_minus_one_(value_at_minus_one), label_(std::move(label)) {
  if (!std::isfinite(sigma) || !std::isfinite(mean)) {
    throw std::invalid_argument("SNExponent: non-finite parameters");
  }
  if (label_.empty()) {
    label_ = "sn(sigma=" + std::to_string(sigma_) + ",m=" +
             std::to_string(mean_) +
             (jump_ ? "," + jump_->describe() : "") + ")";
  }
}

SNExponent SNExponent::with_algebraic(double sigma, double mean,
                                      std::optional<SpectralJumpMeasure> jump,
                                      std::optional<double> value_at_minus_one,
                                      std::function<double(double)> algebraic,
                                      std::string label) {
  SNExponent e(sigma, mean, std::move(jump), value_at_minus_one,
               std::move(label));
  e.algebraic_ = std::move(algebraic);
  return e;
}

double SNExponent::value_at_minus_one() const {
  if (!psi_minus_one_) {
    throw std::domain_error("SNExponent: not analytic at -1");
  }
  return *psi_minus_one_;
}

double SNExponent::operator()(double u) const {
  if (algebraic_) {
    return algebraic_(u);
  }
  return eval_levy_khintchine(u);
}

double SNExponent::eval_levy_khintchine(double u) const {
  if (u < 0.0 && !analytic_at_minus_one()) {
    throw std::domain_error("eval_psi: u < 0 requires analyticity at -1");
  }
  if (u < -1.0) {
    throw std::domain_error("eval_psi: u must be >= -1");
  }
  double value = sigma_ * u * u + mean_ * u;
  if (jump_ && u != 0.0) {
    const SpectralJumpMeasure& pi = *jump_;
    const double au = std::abs(u);
    const double log_au = std::log(au);
    auto weight = (u > 0.0) ? log_compensated_weight : log_compensated_weight_neg;
    const auto integrand = [&pi, log_au, weight](double s, double log_s) {
      const double ld = pi.log_density(s);
      if (!std::isfinite(ld)) {
        return 0.0;  // density underflowed; contribution is zero
      }
      return std::exp(weight(log_au + log_s) + ld);
    };
    // (0, 1]: log substitution (integrand ~ u^2 s^2/2 * density kills the
    // small-jump singularity).
    const double low = integrate_left_tail(
        [&integrand](double t) {
          return integrand(std::exp(t), t) * std::exp(t);
        },
        0.0);
    // [1, inf): direct blocks; diverges (and throws) when the exponential
    // moment does not exist.
    const double high = integrate_right_tail(
        [&integrand](double s) { return integrand(s, std::log(s)); }, 1.0);
    value += low + high;
    for (const auto& a : pi.atoms()) {
      const double z = u * a.depth;
      // e^{-z} - 1 + z at z = u * depth (z < 0 on the continuation side).
      value += a.mass * (std::expm1(-z) + z);
    }
  }
  return value;
}

double eval_psi(const SNExponent& exponent, double u) {
  if (u < 0.0 && !exponent.analytic_at_minus_one()) {
    throw std::domain_error("eval_psi: u < 0 requires analyticity at -1");
  }
  return exponent(u);
}

double levy_tail(const LevyDensity& density, double r) {
  if (!(r > 0.0)) {
    throw std::domain_error("levy_tail: r must be > 0");
  }
  return density.tail(r);
}

// ---------------------------------------------------------------------------
// Builtin SN families

SNExponent brownian_drift(double sigma, double m) {
  const double at_minus_one = sigma - m;
  return SNExponent(sigma, m, std::nullopt, at_minus_one,
                    "sn-brownian(sigma=" + std::to_string(sigma) +
                        ",m=" + std::to_string(m) + ")");
}

SNExponent brownian_exponential_jumps(double sigma, double m, double lambda,
                                      double rho) {
  if (!(lambda > 0.0) || !(rho > 0.0)) {
    throw std::invalid_argument(
        "brownian_exponential_jumps: lambda, rho must be > 0");
  }
  const double log_lr = std::log(lambda * rho);
  const double log_l = std::log(lambda);
  SpectralJumpMeasure jump(
      [log_lr, rho](double s) { return log_lr - rho * s; },
      [log_l, rho](double s) { return log_l - rho * s; }, {},
      "exp-depth(lambda=" + std::to_string(lambda) +
          ",rho=" + std::to_string(rho) + ")");
  std::optional<double> at_minus_one;
  if (rho > 1.0) {
    // sigma - m + lambda \int (e^{-(-1)(-s)}... ) reduces to the closed form
    // sigma - m + lambda / (rho (rho - 1)).
    at_minus_one = sigma - m + lambda / (rho * (rho - 1.0));
  }
  return SNExponent(sigma, m, std::move(jump), at_minus_one,
                    "sn-brownian-exp-jumps(sigma=" + std::to_string(sigma) +
                        ",m=" + std::to_string(m) +
                        ",lambda=" + std::to_string(lambda) +
                        ",rho=" + std::to_string(rho) + ")");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void check_quadrature(ValidationReport& report, const std::string& invariant,
                      const std::function<double()>& eval) {
  try {
    const double v = eval();
    if (!std::isfinite(v)) {
      report.push_back({invariant, "non-finite value"});
    }
  } catch (const std::exception& e) {
    report.push_back({invariant, e.what()});
  }
}

}  // namespace

ValidationReport validate(const SubordinatorExponent& exponent) {
  ValidationReport report;
  if (exponent.drift() < 0.0) {
    report.push_back({"b >= 0", "drift " + std::to_string(exponent.drift())});
  }
  if (exponent.killing() < 0.0) {
    report.push_back(
        {"q >= 0", "killing " + std::to_string(exponent.killing())});
  }
  if (exponent.density()) {
    const LevyDensity& f = *exponent.density();
    if (!f.decreasing_on_grid()) {
      report.push_back({"density monotone decreasing",
                        "increasing segment on the validation grid"});
    }
    check_quadrature(report, "integral (1 ^ r) f(r) dr finite",
                     [&f]() { return f.one_wedge_mass(); });
  }
  // phi(0) = q.
  try {
    const double at_zero = exponent.eval_levy_khintchine(0.0);
    if (std::abs(at_zero - exponent.killing()) > 1e-10) {
      report.push_back({"phi(0) = q", "got " + std::to_string(at_zero)});
    }
  } catch (const std::exception& e) {
    report.push_back({"phi(0) = q", e.what()});
  }
  // Non-decreasing and concave on [0, 20].
  try {
    constexpr int kPoints = 41;
    const double h = 20.0 / (kPoints - 1);
    std::vector<double> values(kPoints);
    for (int i = 0; i < kPoints; ++i) {
      values[i] = exponent.eval_levy_khintchine(h * i);
    }
    for (int i = 0; i + 1 < kPoints; ++i) {
      if (values[i + 1] - values[i] < -1e-8) {
        report.push_back({"phi non-decreasing on [0,20]",
                          "first difference at u=" + std::to_string(h * i)});
        break;
      }
    }
    for (int i = 1; i + 1 < kPoints; ++i) {
      if (values[i + 1] - 2.0 * values[i] + values[i - 1] > 1e-8) {
        report.push_back({"phi concave on [0,20]",
                          "second difference at u=" + std::to_string(h * i)});
        break;
      }
    }
  } catch (const std::exception& e) {
    report.push_back({"phi grid evaluation", e.what()});
  }
  return report;
}

ValidationReport validate(const SNExponent& exponent) {
  ValidationReport report;
  if (exponent.sigma() < 0.0) {
    report.push_back(
        {"sigma >= 0", "sigma " + std::to_string(exponent.sigma())});
  }
  if (exponent.mean() < 0.0) {
    report.push_back({"m >= 0", "mean " + std::to_string(exponent.mean())});
  }
  if (exponent.jump()) {
    check_quadrature(report, "integral (|r| ^ r^2) Pi(dr) finite",
                     [&]() { return exponent.jump()->wedge_mass(); });
  }
  try {
    const double at_zero = exponent.eval_levy_khintchine(0.0);
    if (std::abs(at_zero) > 1e-10) {
      report.push_back({"psi(0) = 0", "got " + std::to_string(at_zero)});
    }
  } catch (const std::exception& e) {
    report.push_back({"psi(0) = 0", e.what()});
  }
  try {
    constexpr int kPoints = 41;
    const double h = 20.0 / (kPoints - 1);
    std::vector<double> values(kPoints);
    for (int i = 0; i < kPoints; ++i) {
      values[i] = exponent.eval_levy_khintchine(h * i);
    }
    for (int i = 1; i + 1 < kPoints; ++i) {
      if (values[i + 1] - 2.0 * values[i] + values[i - 1] < -1e-8) {
        report.push_back({"psi convex on [0,20]",
                          "second difference at u=" + std::to_string(h * i)});
        break;
      }
    }
    // psi'(0+) = m: one-sided difference, slack covers the curvature term.
    const double h0 = 1e-4;
    const double slope = exponent.eval_levy_khintchine(h0) / h0;
    const double curvature_bound =
        2.0 * (exponent.sigma() +
               (exponent.jump() ? exponent.jump()->wedge_mass() : 0.0) + 1.0);
    if (std::abs(slope - exponent.mean()) > h0 * curvature_bound + 1e-7) {
      report.push_back(
          {"psi'(0+) = m", "finite-difference slope " + std::to_string(slope)});
    }
  } catch (const std::exception& e) {
    report.push_back({"psi grid evaluation", e.what()});
  }
  return report;
}

}  // namespace levyexp
