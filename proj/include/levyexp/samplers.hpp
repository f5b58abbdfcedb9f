#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levyexp/exponents.hpp"
#include "levyexp/rng.hpp"

namespace levyexp {

struct PathConfig {
  double eps = 1e-3;       // jump-size cutoff
  double dt = 1e-3;        // Euler step for the diffusive part
  double tail_tol = 1e-6;  // relative truncation tolerance of the functional
  double max_time = 1e4;   // hard horizon
  double x0 = 1e-3;        // Lamperti start point for entrance sampling

  void require_valid() const;
};

struct Draw {
  double value = 0.0;
  bool truncated = false;     // horizon cap hit
  bool step_warning = false;  // integral moved > 10% in a single step
};

struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t truncated_count = 0;
  std::size_t step_warning_count = 0;
  std::string meta;

  double truncation_fraction() const {
    return values.empty()
               ? 0.0
               : static_cast<double>(truncated_count) / values.size();
  }
  double step_warning_fraction() const {
    return values.empty()
               ? 0.0
               : static_cast<double>(step_warning_count) / values.size();
  }
};

namespace detail {

// Inverse-tail sampler for jump sizes above a cutoff. Builtin densities
// with a closed-form inverse are sampled exactly; everything else goes
// through a log-log interpolation table of the tail.
class JumpSizeSampler {
 public:
  JumpSizeSampler() = default;
  static JumpSizeSampler from_density(const LevyDensity& density, double eps);
  static JumpSizeSampler from_measure(const SpectralJumpMeasure& measure,
                                      double eps);
  double rate() const { return rate_; }
  double sample(RngState& rng) const;

 private:
  double rate_ = 0.0;
  std::function<double(double)> closed_inverse_;  // mass -> size
  std::vector<double> log_s_, log_tail_;          // interpolation table
  std::vector<double> atom_depth_, atom_cum_mass_;  // atoms at depth >= eps
  double continuous_rate_ = 0.0;
};

}  // namespace detail

// Prepared sampler for I_phi = int_0^{e_q} exp(-xi_s) ds of a subordinator.
// Small jumps (< eps) are replaced by their drift; the path is piecewise
// linear so each segment integrates in closed form.
class SubordinatorPathSampler {
 public:
  SubordinatorPathSampler(const SubordinatorExponent& phi,
                          const PathConfig& cfg);
  Draw draw(RngState& rng) const;

 private:
  PathConfig cfg_;
  double slope_ = 0.0;      // b + int_0^eps r f(r) dr
  double kill_rate_ = 0.0;  // q
  detail::JumpSizeSampler jumps_;
  double inv_mean_ = 0.0;  // E[I] = 1/phi(1), used by the truncation rule
};

// Prepared sampler for a spectrally negative process: Euler steps of size
// dt for the continuous part (Gaussian + Asmussen-Rosinski surrogate for
// jumps < eps), compensated jumps > eps at their exact exponential event
// times, trapezoid accumulation of the exponential functional.
class SNPathSampler {
 public:
  SNPathSampler(const SNExponent& psi, const PathConfig& cfg);

  Draw draw_expfun(RngState& rng) const;
  Draw draw_lamperti(double x, double t, RngState& rng) const;
  Draw draw_entrance(RngState& rng) const;  // lamperti at x0, time 1
  Draw draw_affine_rhs(double y, RngState& rng) const;

  double drift() const { return drift_eff_; }

 private:
  struct StepState;
  PathConfig cfg_;
  double drift_eff_ = 0.0;   // m - dt-compensation of removed jumps
  double gauss_std_ = 0.0;   // sqrt(2 sigma + small-jump variance)
  detail::JumpSizeSampler jumps_;
  std::optional<double> tau_;  // truncation scale; empty when m <= 0
  double mean_ = 0.0;
};

// Single-draw operations (convenience wrappers constructing a sampler).
Draw sample_subordinator_expfun(const SubordinatorExponent& phi,
                                const PathConfig& cfg, RngState& rng);
Draw sample_sn_expfun(const SNExponent& psi, const PathConfig& cfg,
                      RngState& rng);
Draw sample_lamperti_path(const SNExponent& psi, double x, double t,
                          const PathConfig& cfg, RngState& rng);
Draw sample_entrance_law(const SNExponent& psi, const PathConfig& cfg,
                         RngState& rng);
Draw sample_affine_rhs(const SNExponent& psi, double y, const PathConfig& cfg,
                       RngState& rng);

struct BatchOptions {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  int batch_id = 0;   // distinct batches of one experiment get distinct ids
  int replicas = 8;   // fixed split, independent of hardware
};

// Runs `one` across replicas (threaded when cores are available) and merges
// values in replica order, so results do not depend on scheduling.
SampleBatch sample_batch(const std::function<Draw(RngState&)>& one,
                         const BatchOptions& options, std::string meta);

}  // namespace levyexp
