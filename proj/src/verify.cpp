#include "levyexp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "levyexp/moments.hpp"
#include "levyexp/specfun.hpp"
#include "levyexp/transforms.hpp"

namespace levyexp {

namespace {

// Batch ids keep every role of one pipeline on disjoint substreams.
enum BatchId : int {
  kBatchNumerator = 0,
  kBatchDenominator = 1,
  kBatchReference = 2,
  kBatchPilot = 3,
};

struct MeanSe {
  double mean = 0.0, se = 0.0;
};

MeanSe mean_se_pow(const std::vector<double>& values, int order) {
  double sum = 0.0, sum_sq = 0.0;
  for (double v : values) {
    const double p = std::pow(v, order);
    sum += p;
    sum_sq += p * p;
  }
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / std::max(1.0, n - 1.0))};
}

double spread_over_mean(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double mean = 0.5 * (*lo + *hi);
  return mean != 0.0 ? (*hi - *lo) / std::abs(mean) : 0.0;
}

void absorb_diagnostics(VerificationReport& report, const SampleBatch& batch) {
  const double w = static_cast<double>(batch.values.size());
  const double total = w + report.n;  // running weight; n set at the end
  (void)total;
  report.truncation_fraction =
      std::max(report.truncation_fraction, batch.truncation_fraction());
  report.step_warning_fraction =
      std::max(report.step_warning_fraction, batch.step_warning_fraction());
}

std::vector<double> ratios(const std::vector<double>& a,
                           const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::logic_error("ratio batches must have equal size");
  }
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    r[i] = a[i] / b[i];
  }
  return r;
}

std::vector<double> factorials(int up_to) {
  std::vector<double> f(up_to);
  for (int n = 1; n <= up_to; ++n) {
    f[n - 1] = gamma_fn(n + 1.0);
  }
  return f;
}

// The ratio-moment targets are n! for every admissible exponent; this is
// algebraic, so it is asserted at 1e-12 before any sampling happens.
void assert_ratio_targets(const MomentSequence& pos, const MomentSequence& neg,
                          int up_to) {
  for (int n = 1; n <= up_to; ++n) {
    const double log_target = pos.log_value(n) + neg.log_value(n);
    if (std::abs(std::expm1(log_target - log_gamma(n + 1.0))) > 1e-12) {
      throw std::logic_error(
          "analytic ratio-moment target deviates from n! at order " +
          std::to_string(n));
    }
  }
}

// Fit X = c * Y from moments of order n: E[X^n] = c^n E_an[Y^n].
FittedConstant fit_constant(const std::vector<double>& x_values,
                            const std::vector<int>& orders,
                            const std::vector<double>& analytic_y) {
  FittedConstant fit;
  fit.orders = orders;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const int n = orders[k];
    const MeanSe m = mean_se_pow(x_values, n);
    const double c = std::pow(m.mean / analytic_y[k], 1.0 / n);
    // delta method: dc/dmean = c / (n * mean)
    const double se = std::abs(c / (n * m.mean)) * m.se;
    fit.per_order.push_back(c);
    fit.per_order_se.push_back(se);
  }
  fit.estimate = fit.per_order.front();
  for (std::size_t k = 1; k < fit.per_order.size(); ++k) {
    const double combined = std::sqrt(fit.per_order_se[0] * fit.per_order_se[0] +
                                      fit.per_order_se[k] * fit.per_order_se[k]);
    if (std::abs(fit.per_order[k] - fit.estimate) >
        kConstantConsistencySigmas * combined) {
      fit.consistent = false;
    }
  }
  return fit;
}

void finalize(VerificationReport& report) {
  bool pass = true;
  for (const auto& ks : report.ks) {
    pass = pass && ks.pass;
  }
  for (const auto& m : report.moments) {
    pass = pass && m.report.pass;
  }
  if (report.constant) {
    pass = pass && report.constant->consistent;
  }
  report.pass = pass;
}

// Guard for numerically degenerate two-sample comparisons (both sides
// constant up to discretization): KS on two constants separated by the
// x0/dt bias would spuriously reject, so compare the means at a
// discretization-scale tolerance instead.
bool degenerate_two_sample(VerificationReport& report,
                           const std::vector<double>& a,
                           const std::vector<double>& b,
                           const PathConfig& cfg) {
  if (spread_over_mean(a) > 1e-6 || spread_over_mean(b) > 1e-6) {
    return false;
  }
  const double ma = mean_se_pow(a, 1).mean;
  const double mb = mean_se_pow(b, 1).mean;
  const double tol = 10.0 * (cfg.x0 + cfg.dt + cfg.eps);
  const bool ok = std::abs(ma - mb) <= tol * std::max(1.0, std::abs(mb));
  std::ostringstream note;
  note << "degenerate batches: means " << ma << " vs " << mb
       << " compared at discretization tolerance " << tol
       << (ok ? " (pass)" : " (fail)");
  report.notes.push_back(note.str());
  KSReport stub;
  stub.label = "degenerate-mean-comparison";
  stub.statistic = std::abs(ma - mb);
  stub.n1 = a.size();
  stub.n2 = b.size();
  stub.p_value = ok ? 1.0 : 0.0;
  stub.p_threshold = kKsPThreshold;
  stub.pass = ok;
  report.ks.push_back(stub);
  return true;
}

}  // namespace

VerificationReport verify_nfe(const SubordinatorExponent& phi, std::size_t n,
                              std::uint64_t seed, const PathConfig& cfg) {
  VerificationReport report;
  report.identity = "nfe";
  report.statement = "I_phi / I_psi1 ~ Exp(1), independent factors";
  report.seed = seed;
  report.n = n;
  report.config = cfg;

  SNExponent psi1 = theorem1_forward(phi);
  const MomentSequence pos = expfun_pos_moments(phi, 4);
  const MomentSequence neg = expfun_neg_moments(psi1, 4);
  assert_ratio_targets(pos, neg, 4);

  SampleBatch batch_num = sample_batch(
      [s = SubordinatorPathSampler(phi, cfg)](RngState& rng) {
        return s.draw(rng);
      },
      {.n = n, .seed = seed, .batch_id = kBatchNumerator, .replicas = 8},
      "I_phi[" + phi.label() + "]");
  SampleBatch batch_den = sample_batch(
      [s = SNPathSampler(psi1, cfg)](RngState& rng) {
        return s.draw_expfun(rng);
      },
      {.n = n, .seed = seed, .batch_id = kBatchDenominator, .replicas = 8},
      "I_psi1[" + psi1.label() + "]");
  absorb_diagnostics(report, batch_num);
  absorb_diagnostics(report, batch_den);

  const std::vector<double> ratio = ratios(batch_num.values, batch_den.values);
  report.ks.push_back(ks_test_exp1(ratio, kKsPThreshold));

  report.moments.push_back(
      {"ratio moments vs n!",
       empirical_moments(ratio, {1, 2, 3, 4}, factorials(4), kMomentZMax)});

  std::vector<double> neg_targets(4);
  for (int k = 1; k <= 4; ++k) {
    neg_targets[k - 1] = neg.value(k);
  }
  report.moments.push_back(
      {"negative entire moments of I_psi1 vs prod phi(k)",
       empirical_moments(batch_den.values, {-1, -2, -3, -4}, neg_targets,
                         kMomentZMax)});
  finalize(report);
  return report;
}

VerificationReport verify_nfe2(const SNExponent& psi, std::size_t n,
                               std::uint64_t seed, const PathConfig& cfg) {
  VerificationReport report;
  report.identity = "nfe2";
  report.statement = "I_phi_{-1} / I_psi ~ Exp(1), independent factors";
  report.seed = seed;
  report.n = n;
  report.config = cfg;

  SubordinatorExponent phi_m1 = theorem1_converse(psi);
  const MomentSequence pos = expfun_pos_moments(phi_m1, 4);
  const MomentSequence neg = expfun_neg_moments(psi, 4);
  assert_ratio_targets(pos, neg, 4);

  SampleBatch batch_num = sample_batch(
      [s = SubordinatorPathSampler(phi_m1, cfg)](RngState& rng) {
        return s.draw(rng);
      },
      {.n = n, .seed = seed, .batch_id = kBatchNumerator, .replicas = 8},
      "I_phi_m1[" + phi_m1.label() + "]");
  SampleBatch batch_den = sample_batch(
      [s = SNPathSampler(psi, cfg)](RngState& rng) {
        return s.draw_expfun(rng);
      },
      {.n = n, .seed = seed, .batch_id = kBatchDenominator, .replicas = 8},
      "I_psi[" + psi.label() + "]");
  absorb_diagnostics(report, batch_num);
  absorb_diagnostics(report, batch_den);

  const std::vector<double> ratio = ratios(batch_num.values, batch_den.values);
  report.ks.push_back(ks_test_exp1(ratio, kKsPThreshold));
  report.moments.push_back(
      {"ratio moments vs n!",
       empirical_moments(ratio, {1, 2, 3, 4}, factorials(4), kMomentZMax)});

  std::vector<double> neg_targets(4);
  for (int k = 1; k <= 4; ++k) {
    neg_targets[k - 1] = neg.value(k);
  }
  report.moments.push_back(
      {"negative entire moments of I_psi",
       empirical_moments(batch_den.values, {-1, -2, -3, -4}, neg_targets,
                         kMomentZMax)});
  finalize(report);
  return report;
}

VerificationReport verify_prop1(const SNExponent& psi, std::size_t n,
                                std::uint64_t seed, const PathConfig& cfg) {
  VerificationReport report;
  report.identity = "prop1";
  report.statement = "J_psi ~ 1 / I_psi2 with psi2 the shifted exponent";
  report.seed = seed;
  report.n = n;
  report.config = cfg;

  SNExponent psi2 = prop1_transform(psi);
  const double mean_target = psi(1.0);

  SampleBatch batch_entrance = sample_batch(
      [s = SNPathSampler(psi, cfg)](RngState& rng) {
        return s.draw_entrance(rng);
      },
      {.n = n, .seed = seed, .batch_id = kBatchNumerator, .replicas = 8},
      "J[" + psi.label() + "]");
  SampleBatch batch_i2 = sample_batch(
      [s = SNPathSampler(psi2, cfg)](RngState& rng) {
        return s.draw_expfun(rng);
      },
      {.n = n, .seed = seed, .batch_id = kBatchDenominator, .replicas = 8},
      "I_psi2[" + psi2.label() + "]");
  absorb_diagnostics(report, batch_entrance);
  absorb_diagnostics(report, batch_i2);

  std::vector<double> recip(batch_i2.values.size());
  for (std::size_t i = 0; i < recip.size(); ++i) {
    recip[i] = 1.0 / batch_i2.values[i];
  }

  if (!degenerate_two_sample(report, batch_entrance.values, recip, cfg)) {
    report.ks.push_back(ks_two_sample(batch_entrance.values, recip,
                                      kKsPThreshold,
                                      "entrance vs reciprocal functional"));
  }
  report.moments.push_back(
      {"entrance mean vs psi(1)",
       empirical_moments(batch_entrance.values, {1}, {mean_target},
                         kMomentZMax)});
  report.moments.push_back(
      {"reciprocal functional mean vs psi(1)",
       empirical_moments(recip, {1}, {mean_target}, kMomentZMax)});
  finalize(report);
  return report;
}

VerificationReport verify_selfdecomp(const SNExponent& psi, double y,
                                     std::size_t n, std::uint64_t seed,
                                     const PathConfig& cfg) {
  if (!(y > 0.0)) {
    throw std::invalid_argument("verify_selfdecomp: y must be > 0");
  }
  VerificationReport report;
  report.identity = "selfdecomp";
  std::ostringstream st;
  st << "I_psi ~ int_0^{T_y} e^{-Xi} ds + e^{-y} I'_psi at y = " << y;
  report.statement = st.str();
  report.seed = seed;
  report.n = n;
  report.config = cfg;

  SNPathSampler sampler(psi, cfg);
  SampleBatch batch_i = sample_batch(
      [&sampler](RngState& rng) { return sampler.draw_expfun(rng); },
      {.n = n, .seed = seed, .batch_id = kBatchNumerator, .replicas = 8},
      "I_psi[" + psi.label() + "]");
  SampleBatch batch_rhs = sample_batch(
      [&sampler, y](RngState& rng) { return sampler.draw_affine_rhs(y, rng); },
      {.n = n, .seed = seed, .batch_id = kBatchDenominator, .replicas = 8},
      "affine-rhs(y=" + std::to_string(y) + ")");
  absorb_diagnostics(report, batch_i);
  absorb_diagnostics(report, batch_rhs);

  if (!degenerate_two_sample(report, batch_i.values, batch_rhs.values, cfg)) {
    report.ks.push_back(ks_two_sample(batch_i.values, batch_rhs.values,
                                      kKsPThreshold,
                                      "functional vs affine right-hand side"));
  }
  finalize(report);
  return report;
}

// ---------------------------------------------------------------------------
// Section 3 battery

namespace {

// Length-biased sampler for V = S(alpha)^{-alpha}: acceptance-rejection with
// weight V, capped at the pilot 99.99th percentile.
class LengthBiasedSampler {
 public:
  LengthBiasedSampler(double alpha, std::uint64_t seed, int batch_id)
      : alpha_(alpha) {
    RngState pilot = RngState(seed).substream(
        static_cast<std::uint64_t>(batch_id) * 64 + 63);
    std::vector<double> values(50000);
    for (auto& v : values) {
      v = std::pow(pilot.positive_stable(alpha_), -alpha_);
    }
    std::sort(values.begin(), values.end());
    cap_ = values[static_cast<std::size_t>(0.9999 * (values.size() - 1))];
  }

  double cap() const { return cap_; }

  double draw(RngState& rng) const {
    for (;;) {
      const double v = std::pow(rng.positive_stable(alpha_), -alpha_);
      if (v >= cap_ || rng.uniform() < v / cap_) {
        return v;
      }
    }
  }

 private:
  double alpha_;
  double cap_ = 1.0;
};

SampleBatch elementary_batch(const std::function<double(RngState&)>& one,
                             std::size_t n, std::uint64_t seed, int batch_id,
                             std::string meta) {
  return sample_batch(
      [&one](RngState& rng) {
        return Draw{one(rng), false, false};
      },
      {.n = n, .seed = seed, .batch_id = batch_id, .replicas = 8},
      std::move(meta));
}

std::vector<double> rescaled(const std::vector<double>& values, double factor) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = values[i] * factor;
  }
  return out;
}

}  // namespace

std::vector<VerificationReport> verify_section3(double alpha, std::size_t n,
                                                std::uint64_t seed,
                                                const PathConfig& cfg) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("verify_section3: alpha must be in (0,1)");
  }
  std::vector<VerificationReport> bundle;
  const double q = 1.0 / gamma_fn(1.0 - alpha);
  SubordinatorExponent phi(0.0, q, LevyDensity::stable_example(alpha));
  SNExponent psi1 = theorem1_forward(phi);
  SNExponent psi2 = prop1_transform(psi1);
  SubordinatorExponent phi_m1 = theorem1_converse(psi2);
  SubordinatorExponent phi_hat(0.0, 0.0, LevyDensity::dual_example(alpha));
  SNExponent psi1_hat = theorem1_forward(phi_hat);

  const std::vector<int> fit_orders{1, 2, 3};

  // (iv) elementary triple factorization: U S1^{-a} G^{a}(a+1) ~ Exp(1).
  // Pure elementary sampling; serves as the battery's own oracle.
  {
    VerificationReport report;
    report.identity = "section3-iv";
    report.statement = "U * S1^{-a} * G^a(a+1) ~ Exp(1)";
    report.seed = seed;
    report.n = n;
    report.config = cfg;
    LengthBiasedSampler s1(alpha, seed, 40);
    std::ostringstream note;
    note << "length-bias acceptance cap (pilot 99.99th pct): " << s1.cap();
    report.notes.push_back(note.str());
    SampleBatch x = elementary_batch(
        [alpha, &s1](RngState& rng) {
          const double u = rng.uniform();
          const double g = rng.gamma(alpha + 1.0);
          return u * s1.draw(rng) * std::pow(g, alpha);
        },
        n, seed, 41, "U*S1^{-a}*G^a");
    report.ks.push_back(ks_test_exp1(x.values, kKsPThreshold));
    report.moments.push_back(
        {"moments vs n!",
         empirical_moments(x.values, {1, 2, 3, 4}, factorials(4),
                           kMomentZMax)});
    finalize(report);
    bundle.push_back(std::move(report));
  }

  // (i) I_psi1 vs c1 * e^{-alpha}.
  {
    VerificationReport report;
    report.identity = "section3-i";
    report.statement = "I_psi1 ~ c1 * e^{-a}";
    report.seed = seed;
    report.n = n;
    report.config = cfg;
    SampleBatch b = sample_batch(
        [s = SNPathSampler(psi1, cfg)](RngState& rng) {
          return s.draw_expfun(rng);
        },
        {.n = n, .seed = seed, .batch_id = 1, .replicas = 8}, "I_psi1");
    absorb_diagnostics(report, b);
    // Reciprocal-order fit: E[(e^{-a})^{-n}] = Gamma(1 + a n); positive
    // orders of the target law are infinite for a n >= 1.
    std::vector<double> targets;
    std::vector<int> neg_orders;
    for (int k : fit_orders) {
      neg_orders.push_back(-k);
      targets.push_back(gamma_fn(1.0 + alpha * k));
    }
    std::vector<double> recip(b.values.size());
    for (std::size_t i = 0; i < recip.size(); ++i) {
      recip[i] = 1.0 / b.values[i];
    }
    FittedConstant fit = fit_constant(recip, fit_orders, targets);
    // X^{-1} = (c Y)^{-1}: the fit on reciprocals estimates 1/c1.
    for (auto& c : fit.per_order) {
      c = 1.0 / c;
    }
    for (std::size_t k = 0; k < fit.per_order.size(); ++k) {
      fit.per_order_se[k] *= fit.per_order[k] * fit.per_order[k];
    }
    fit.estimate = fit.per_order.front();
    report.constant = fit;
    const double c1 = fit.estimate;
    const double inv_alpha = 1.0 / alpha;
    report.ks.push_back(ks_test_cdf(
        b.values,
        [c1, inv_alpha](double x) {
          return x > 0.0 ? std::exp(-std::pow(x / c1, -inv_alpha)) : 0.0;
        },
        kKsPThreshold, "I_psi1/c1 vs law of e^{-a}"));
    finalize(report);
    bundle.push_back(std::move(report));
  }

  // (ii) alpha I_psi2 vs c2 * G^{-a}(a+1).
  {
    VerificationReport report;
    report.identity = "section3-ii";
    report.statement = "a * I_psi2 ~ c2 * G^{-a}(a+1)";
    report.seed = seed;
    report.n = n;
    report.config = cfg;
    SampleBatch b = sample_batch(
        [s = SNPathSampler(psi2, cfg)](RngState& rng) {
          return s.draw_expfun(rng);
        },
        {.n = n, .seed = seed, .batch_id = 2, .replicas = 8}, "I_psi2");
    absorb_diagnostics(report, b);
    const std::vector<double> x = rescaled(b.values, alpha);
    std::vector<double> targets;  // E[G^{a n}] = Gamma(a+1+a n)/Gamma(a+1)
    for (int k : fit_orders) {
      targets.push_back(
          std::exp(log_gamma(alpha + 1.0 + alpha * k) - log_gamma(alpha + 1.0)));
    }
    std::vector<double> recip(x.size());
    for (std::size_t i = 0; i < recip.size(); ++i) {
      recip[i] = 1.0 / x[i];
    }
    FittedConstant fit = fit_constant(recip, fit_orders, targets);
    for (auto& c : fit.per_order) {
      c = 1.0 / c;
    }
    for (std::size_t k = 0; k < fit.per_order.size(); ++k) {
      fit.per_order_se[k] *= fit.per_order[k] * fit.per_order[k];
    }
    fit.estimate = fit.per_order.front();
    report.constant = fit;
    SampleBatch ref = elementary_batch(
        [alpha](RngState& rng) {
          return std::pow(rng.gamma(alpha + 1.0), -alpha);
        },
        n, seed, 42, "G^{-a}(a+1)");
    report.ks.push_back(ks_two_sample(rescaled(x, 1.0 / fit.estimate),
                                      ref.values, kKsPThreshold,
                                      "a I_psi2 / c2 vs G^{-a}(a+1)"));
    finalize(report);
    bundle.push_back(std::move(report));
  }

  // (iii) alpha I_phi_{-1} vs c3 * U S1^{-a}; positive orders are all finite.
  {
    VerificationReport report;
    report.identity = "section3-iii";
    report.statement = "a * I_phi_{-1} ~ c3 * U * S1^{-a}";
    report.seed = seed;
    report.n = n;
    report.config = cfg;
    SampleBatch b = sample_batch(
        [s = SubordinatorPathSampler(phi_m1, cfg)](RngState& rng) {
          return s.draw(rng);
        },
        {.n = n, .seed = seed, .batch_id = 3, .replicas = 8}, "I_phi_m1");
    absorb_diagnostics(report, b);
    const std::vector<double> x = rescaled(b.values, alpha);
    std::vector<double> targets;  // E[(U S1^{-a})^n]
    for (int k : fit_orders) {
      targets.push_back(std::exp(log_gamma(alpha + 1.0) + log_gamma(k + 1.0) -
                                 log_gamma(alpha * k + alpha + 1.0)));
    }
    FittedConstant fit = fit_constant(x, fit_orders, targets);
    report.constant = fit;
    LengthBiasedSampler s1(alpha, seed, 43);
    std::ostringstream note;
    note << "length-bias acceptance cap (pilot 99.99th pct): " << s1.cap();
    report.notes.push_back(note.str());
    SampleBatch ref = elementary_batch(
        [&s1](RngState& rng) { return rng.uniform() * s1.draw(rng); }, n, seed,
        44, "U*S1^{-a}");
    report.ks.push_back(ks_two_sample(rescaled(x, 1.0 / fit.estimate),
                                      ref.values, kKsPThreshold,
                                      "a I_phi_m1 / c3 vs U S1^{-a}"));
    finalize(report);
    bundle.push_back(std::move(report));
  }

  // (v) I_psi1_hat vs c4 * S(alpha)^alpha; E[S^a] is infinite, so both the
  // fit and the moment checks live on reciprocal orders.
  {
    VerificationReport report;
    report.identity = "section3-v";
    report.statement = "I_psi1_hat ~ c4 * S(a)^a";
    report.seed = seed;
    report.n = n;
    report.config = cfg;
    SampleBatch b = sample_batch(
        [s = SNPathSampler(psi1_hat, cfg)](RngState& rng) {
          return s.draw_expfun(rng);
        },
        {.n = n, .seed = seed, .batch_id = 4, .replicas = 8}, "I_psi1_hat");
    absorb_diagnostics(report, b);
    std::vector<double> targets;  // E[S^{-a n}] = Gamma(n+1)/Gamma(a n + 1)
    for (int k : fit_orders) {
      targets.push_back(
          std::exp(log_gamma(k + 1.0) - log_gamma(alpha * k + 1.0)));
    }
    std::vector<double> recip(b.values.size());
    for (std::size_t i = 0; i < recip.size(); ++i) {
      recip[i] = 1.0 / b.values[i];
    }
    FittedConstant fit = fit_constant(recip, fit_orders, targets);
    for (auto& c : fit.per_order) {
      c = 1.0 / c;
    }
    for (std::size_t k = 0; k < fit.per_order.size(); ++k) {
      fit.per_order_se[k] *= fit.per_order[k] * fit.per_order[k];
    }
    fit.estimate = fit.per_order.front();
    report.constant = fit;
    SampleBatch ref = elementary_batch(
        [alpha](RngState& rng) {
          return std::pow(rng.positive_stable(alpha), alpha);
        },
        n, seed, 45, "S^a");
    report.ks.push_back(ks_two_sample(rescaled(b.values, 1.0 / fit.estimate),
                                      ref.values, kKsPThreshold,
                                      "I_psi1_hat / c4 vs S^a"));
    finalize(report);
    bundle.push_back(std::move(report));
  }

  return bundle;
}

}  // namespace levyexp
