#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levyexp/levy_density.hpp"

namespace levyexp {

struct ValidationIssue {
  std::string invariant;
  std::string detail;
};
using ValidationReport = std::vector<ValidationIssue>;

// Laplace exponent of a (possibly killed) subordinator,
//   phi(u) = b u + q + \int_0^inf (1 - e^{-u r}) f(r) dr.
// Transform-reconstructed exponents additionally carry an algebraic
// evaluator, which then becomes the primary one; the Levy-data route stays
// available as eval_levy_khintchine and is what simulation consumes.
class SubordinatorExponent {
 public:
  SubordinatorExponent(double drift, double killing,
                       std::optional<LevyDensity> density);

  static SubordinatorExponent with_algebraic(
      double drift, double killing, std::optional<LevyDensity> density,
      std::function<double(double)> algebraic, std::string label);

  double drift() const { return drift_; }
  double killing() const { return killing_; }
  const std::optional<LevyDensity>& density() const { return density_; }
  bool has_algebraic() const { return static_cast<bool>(algebraic_); }

  double operator()(double u) const;          // primary evaluator
  double eval_levy_khintchine(double u) const;  // always the triplet route
  const std::string& label() const { return label_; }

 private:
  double drift_, killing_;
  std::optional<LevyDensity> density_;
  std::function<double(double)> algebraic_;
  std::string label_;
};

// Atom of a spectral measure on (-inf, 0), stored in depth coordinates:
// mass at r = -depth.
struct SpectralAtom {
  double depth;
  double mass;
};

// Jump measure of a spectrally negative process, described through the
// depth variable s = -r > 0: density(s), tail(s) = Pi(-inf, -s).
class SpectralJumpMeasure {
 public:
  SpectralJumpMeasure(std::function<double(double)> log_density,
                      std::function<double(double)> log_tail,
                      std::vector<SpectralAtom> atoms, std::string description);

  double density(double s) const;
  double log_density(double s) const;
  bool has_closed_tail() const { return static_cast<bool>(log_tail_); }
  double tail(double s) const;  // includes atoms at depth > s
  const std::vector<SpectralAtom>& atoms() const { return atoms_; }
  const std::string& describe() const { return label_; }

  // \int_{s >= eps} s dPi (continuous part + atoms).
  double abs_moment_beyond(double eps) const;
  // \int_{0 < s < eps} s^2 dPi.
  double second_moment_within(double eps) const;
  // \int (s ^ s^2) dPi over (0, inf).
  double wedge_mass() const;

 private:
  std::function<double(double)> log_density_, log_tail_;
  std::vector<SpectralAtom> atoms_;
  std::string label_;
};

// Laplace exponent of a conservative spectrally negative Levy process,
//   psi(u) = sigma u^2 + m u + \int_{-inf}^0 (e^{ur} - 1 - ur) Pi(dr),
// so the Gaussian part has variance 2 sigma per unit time and m = E[Xi_1].
class SNExponent {
 public:
  SNExponent(double sigma, double mean, std::optional<SpectralJumpMeasure> jump,
             std::optional<double> value_at_minus_one, std::string label);

  static SNExponent with_algebraic(double sigma, double mean,
                                   std::optional<SpectralJumpMeasure> jump,
                                   std::optional<double> value_at_minus_one,
                                   std::function<double(double)> algebraic,
                                   std::string label);

  double sigma() const { return sigma_; }
  double mean() const { return mean_; }
  const std::optional<SpectralJumpMeasure>& jump() const { return jump_; }
  bool analytic_at_minus_one() const { return psi_minus_one_.has_value(); }
  double value_at_minus_one() const;  // throws if not analytic
  bool has_algebraic() const { return static_cast<bool>(algebraic_); }

  double operator()(double u) const;            // primary evaluator
  double eval_levy_khintchine(double u) const;  // always the triplet route
  const std::string& label() const { return label_; }

 private:
  double sigma_, mean_;
  std::optional<SpectralJumpMeasure> jump_;
  std::optional<double> psi_minus_one_;
  std::function<double(double)> algebraic_;
  std::string label_;
};

// Builtin spectrally negative families.
SNExponent brownian_drift(double sigma, double m);
// Negative jumps with density lambda rho e^{-rho s} in depth coordinates;
// analytic at -1 exactly when rho > 1.
SNExponent brownian_exponential_jumps(double sigma, double m, double lambda,
                                      double rho);

// Spec operations.
double eval_phi(const SubordinatorExponent& exponent, double u);
double eval_psi(const SNExponent& exponent, double u);
double levy_tail(const LevyDensity& density, double r);

ValidationReport validate(const SubordinatorExponent& exponent);
ValidationReport validate(const SNExponent& exponent);

}  // namespace levyexp
