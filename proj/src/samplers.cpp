#include "levyexp/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "levyexp/quadrature.hpp"

namespace levyexp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kTableNodes = 2048;
constexpr int kSubstreamStride = 64;
}  // namespace

void PathConfig::require_valid() const {
  if (!(eps > 0.0) || !(dt > 0.0) || !(tail_tol > 0.0) || !(max_time > 0.0) ||
      !(x0 > 0.0)) {
    throw std::invalid_argument("PathConfig: all fields must be positive");
  }
}

namespace detail {

namespace {

// Shared table construction: nodes geometric on [eps, s_max], log tail at
// each node, linear interpolation in log-log space.
void build_table(const std::function<double(double)>& point_tail,
                 double eps, double total, std::vector<double>& log_s,
                 std::vector<double>& log_tail) {
  // Find s_max with tail below total * 1e-13.
  double s_max = std::max(eps * 2.0, 1.0);
  const double target = total * 1e-13;
  for (int i = 0; i < 120 && point_tail(s_max) > target; ++i) {
    s_max *= 2.0;
  }
  log_s.reserve(kTableNodes);
  log_tail.reserve(kTableNodes);
  const double l0 = std::log(eps), l1 = std::log(s_max);
  double prev = kInf;
  for (int i = 0; i < kTableNodes; ++i) {
    const double ls = l0 + (l1 - l0) * i / (kTableNodes - 1);
    const double t = point_tail(std::exp(ls));
    if (!(t > 0.0) || !(t < prev)) {
      continue;  // keep the table strictly decreasing
    }
    log_s.push_back(ls);
    log_tail.push_back(std::log(t));
    prev = t;
  }
  if (log_s.size() < 2) {
    throw std::runtime_error("jump sampler: could not build tail table");
  }
}

}  // namespace

JumpSizeSampler JumpSizeSampler::from_density(const LevyDensity& density,
                                              double eps) {
  JumpSizeSampler out;
  out.continuous_rate_ = density.tail(eps);
  out.rate_ = out.continuous_rate_;
  if (!(out.rate_ > 1e-300)) {
    out.rate_ = 0.0;
    return out;
  }
  if (density.has_closed_inverse_tail()) {
    LevyDensity d = density;
    out.closed_inverse_ = [d](double mass) { return d.inverse_tail(mass); };
    return out;
  }
  LevyDensity d = density;
  build_table([d](double s) { return d.tail(s); }, eps, out.rate_, out.log_s_,
              out.log_tail_);
  return out;
}

JumpSizeSampler JumpSizeSampler::from_measure(const SpectralJumpMeasure& measure,
                                              double eps) {
  JumpSizeSampler out;
  std::function<double(double)> cont_tail;
  if (measure.has_closed_tail()) {
    SpectralJumpMeasure m = measure;
    cont_tail = [m](double s) {
      double t = m.tail(s);
      for (const auto& a : m.atoms()) {
        if (a.depth > s) {
          t -= a.mass;
        }
      }
      return t;
    };
  } else {
    SpectralJumpMeasure m = measure;
    cont_tail = [m](double s) {
      return integrate_right_tail(
          [&m](double v) { return m.density(v); }, s);
    };
  }
  out.continuous_rate_ = cont_tail(eps);
  double cum = out.continuous_rate_;
  for (const auto& a : measure.atoms()) {
    if (a.depth >= eps) {
      cum += a.mass;
      out.atom_depth_.push_back(a.depth);
      out.atom_cum_mass_.push_back(cum);
    }
  }
  out.rate_ = cum;
  if (!(out.rate_ > 1e-300)) {
    out.rate_ = 0.0;
    return out;
  }
  if (out.continuous_rate_ > 1e-300) {
    build_table(cont_tail, eps, out.continuous_rate_, out.log_s_,
                out.log_tail_);
  }
  return out;
}

double JumpSizeSampler::sample(RngState& rng) const {
  const double y = rng.uniform() * rate_;
  if (y > continuous_rate_) {
    // One of the atoms.
    for (std::size_t i = 0; i < atom_cum_mass_.size(); ++i) {
      if (y <= atom_cum_mass_[i]) {
        return atom_depth_[i];
      }
    }
    return atom_depth_.back();
  }
  if (closed_inverse_) {
    return closed_inverse_(y);
  }
  const double ly = std::log(y);
  // log_tail_ is strictly decreasing; find the bracketing pair.
  const auto it = std::lower_bound(log_tail_.begin(), log_tail_.end(), ly,
                                   [](double a, double b) { return a > b; });
  if (it == log_tail_.begin()) {
    return std::exp(log_s_.front());
  }
  if (it == log_tail_.end()) {
    return std::exp(log_s_.back());
  }
  const std::size_t j = static_cast<std::size_t>(it - log_tail_.begin());
  const double t0 = log_tail_[j - 1], t1 = log_tail_[j];
  const double s0 = log_s_[j - 1], s1 = log_s_[j];
  return std::exp(s0 + (ly - t0) * (s1 - s0) / (t1 - t0));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subordinator paths

SubordinatorPathSampler::SubordinatorPathSampler(const SubordinatorExponent& phi,
                                                 const PathConfig& cfg)
    : cfg_(cfg) {
  cfg.require_valid();
  kill_rate_ = phi.killing();
  slope_ = phi.drift();
  if (phi.density()) {
    slope_ += phi.density()->small_jump_drift(cfg.eps);
    jumps_ = detail::JumpSizeSampler::from_density(*phi.density(), cfg.eps);
  }
  const double phi1 = phi(1.0);
  if (!(phi1 > 0.0)) {
    throw std::invalid_argument(
        "sample_subordinator_expfun: phi(1) <= 0, the functional has no "
        "integrable tail bound");
  }
  inv_mean_ = 1.0 / phi1;
}

Draw SubordinatorPathSampler::draw(RngState& rng) const {
  double t = 0.0, xi = 0.0, acc = 0.0;
  const double kill_time =
      kill_rate_ > 0.0 ? rng.exponential() / kill_rate_ : kInf;
  const double rate = jumps_.rate();
  double to_jump = rate > 0.0 ? rng.exponential() / rate : kInf;
  // Cap drift-only stretches so the truncation rule gets re-checked; an
  // advance of 40 in xi is far beyond any tail_tol of interest.
  const double chunk = slope_ > 0.0 ? 40.0 / slope_ : kInf;
  for (;;) {
    bool jump_now = false;
    double seg = std::min(chunk, cfg_.max_time - t);
    if (to_jump < seg) {
      seg = to_jump;
      jump_now = true;
    }
    if (kill_time - t < seg) {
      seg = kill_time - t;
      jump_now = false;
    }
    // closed-form integral of exp(-xi) over a linear segment
    const double emx = std::exp(-xi);
    if (slope_ > 0.0) {
      acc += emx * -std::expm1(-slope_ * seg) / slope_;
    } else {
      acc += emx * seg;
    }
    xi += slope_ * seg;
    t += seg;
    to_jump -= seg;
    if (t >= kill_time) {
      return {acc, false, false};
    }
    if (t >= cfg_.max_time) {
      return {acc, true, false};
    }
    if (jump_now) {
      xi += jumps_.sample(rng);
      to_jump = rng.exponential() / rate;
    }
    // xi is non-decreasing, so it always sits at its running maximum.
    if (std::exp(-xi) * inv_mean_ <= cfg_.tail_tol * acc) {
      return {acc, false, false};
    }
  }
}

// ---------------------------------------------------------------------------
// Spectrally negative paths

SNPathSampler::SNPathSampler(const SNExponent& psi, const PathConfig& cfg)
    : cfg_(cfg) {
  cfg.require_valid();
  mean_ = psi.mean();
  drift_eff_ = mean_;
  double var_rate = 2.0 * psi.sigma();
  if (psi.jump()) {
    jumps_ = detail::JumpSizeSampler::from_measure(*psi.jump(), cfg.eps);
    drift_eff_ += psi.jump()->abs_moment_beyond(cfg.eps);
    var_rate += psi.jump()->second_moment_within(cfg.eps);
  }
  gauss_std_ = std::sqrt(var_rate);
  if (psi.analytic_at_minus_one() && psi.value_at_minus_one() < 0.0) {
    tau_ = -1.0 / psi.value_at_minus_one();
  } else if (mean_ > 0.0) {
    tau_ = 1.0 / mean_;
  }
}

Draw SNPathSampler::draw_expfun(RngState& rng) const {
  if (!(mean_ > 0.0)) {
    throw std::invalid_argument("sample_sn_expfun: requires m > 0");
  }
  const double tau = *tau_;
  const double rate = jumps_.rate();
  double t = 0.0, xi = 0.0, xi_max = 0.0, acc = 0.0;
  double emx = 1.0;
  double to_jump = rate > 0.0 ? rng.exponential() / rate : kInf;
  bool warned = false;
  for (;;) {
    bool jump_now = false;
    double seg = std::min(cfg_.dt, cfg_.max_time - t);
    if (to_jump < seg) {
      seg = to_jump;
      jump_now = true;
    }
    double xi_new = xi + drift_eff_ * seg;
    if (gauss_std_ > 0.0) {
      xi_new += gauss_std_ * std::sqrt(seg) * rng.normal();
    }
    double emx_new = std::exp(-xi_new);
    const double inc = 0.5 * (emx + emx_new) * seg;
    acc += inc;
    t += seg;
    to_jump -= seg;
    if (inc > 0.1 * (acc - inc + emx_new * tau)) {
      warned = true;
    }
    if (jump_now) {
      xi_new -= jumps_.sample(rng);
      emx_new = std::exp(-xi_new);
      to_jump = rng.exponential() / rate;
    }
    xi = xi_new;
    emx = emx_new;
    if (xi > xi_max) {
      xi_max = xi;
      if (emx * tau <= cfg_.tail_tol * acc) {
        return {acc, false, warned};
      }
    }
    if (t >= cfg_.max_time) {
      return {acc, true, warned};
    }
  }
}

Draw SNPathSampler::draw_lamperti(double x, double t_target,
                                  RngState& rng) const {
  if (!(x > 0.0) || !(t_target > 0.0)) {
    throw std::invalid_argument("sample_lamperti_path: x, t must be > 0");
  }
  const double clock_target = t_target / x;
  const double rate = jumps_.rate();
  double t = 0.0, xi = 0.0, clock = 0.0;
  double epx = 1.0;
  double to_jump = rate > 0.0 ? rng.exponential() / rate : kInf;
  bool warned = false;
  for (;;) {
    bool jump_now = false;
    double seg = std::min(cfg_.dt, cfg_.max_time - t);
    if (to_jump < seg) {
      seg = to_jump;
      jump_now = true;
    }
    double xi_new = xi + drift_eff_ * seg;
    if (gauss_std_ > 0.0) {
      xi_new += gauss_std_ * std::sqrt(seg) * rng.normal();
    }
    double epx_new = std::exp(xi_new);
    const double inc = 0.5 * (epx + epx_new) * seg;
    if (clock + inc >= clock_target) {
      // Crossing inside this step: place it by linear interpolation of the
      // clock, evaluate xi linearly at the crossing point.
      const double theta = inc > 0.0 ? (clock_target - clock) / inc : 0.0;
      const double xi_cross = xi + theta * (xi_new - xi);
      return {x * std::exp(xi_cross), false, warned};
    }
    clock += inc;
    t += seg;
    to_jump -= seg;
    if (jump_now) {
      xi_new -= jumps_.sample(rng);
      epx_new = std::exp(xi_new);
      to_jump = rng.exponential() / rate;
    }
    xi = xi_new;
    epx = epx_new;
    if (t >= cfg_.max_time) {
      return {x * std::exp(xi), true, warned};
    }
  }
}

Draw SNPathSampler::draw_entrance(RngState& rng) const {
  return draw_lamperti(cfg_.x0, 1.0, rng);
}

Draw SNPathSampler::draw_affine_rhs(double y, RngState& rng) const {
  if (!(y > 0.0)) {
    throw std::invalid_argument("sample_affine_rhs: y must be > 0");
  }
  const double rate = jumps_.rate();
  double t = 0.0, xi = 0.0, acc = 0.0;
  double emx = 1.0;
  double to_jump = rate > 0.0 ? rng.exponential() / rate : kInf;
  bool truncated = false;
  bool warned = false;
  for (;;) {
    bool jump_now = false;
    double seg = std::min(cfg_.dt, cfg_.max_time - t);
    if (to_jump < seg) {
      seg = to_jump;
      jump_now = true;
    }
    double xi_new = xi + drift_eff_ * seg;
    if (gauss_std_ > 0.0) {
      xi_new += gauss_std_ * std::sqrt(seg) * rng.normal();
    }
    double emx_new = std::exp(-xi_new);
    acc += 0.5 * (emx + emx_new) * seg;
    t += seg;
    to_jump -= seg;
    if (xi_new >= y) {
      // No positive jumps: first passage happens through the continuous
      // part, taken at the first grid point at or above y.
      break;
    }
    if (jump_now) {
      xi_new -= jumps_.sample(rng);
      emx_new = std::exp(-xi_new);
      to_jump = rng.exponential() / rate;
    }
    xi = xi_new;
    emx = emx_new;
    if (t >= cfg_.max_time) {
      truncated = true;
      break;
    }
  }
  const Draw tail_part = draw_expfun(rng);
  return {acc + std::exp(-y) * tail_part.value,
          truncated || tail_part.truncated, warned || tail_part.step_warning};
}

// ---------------------------------------------------------------------------
// Free single-draw wrappers

Draw sample_subordinator_expfun(const SubordinatorExponent& phi,
                                const PathConfig& cfg, RngState& rng) {
  return SubordinatorPathSampler(phi, cfg).draw(rng);
}
Draw sample_sn_expfun(const SNExponent& psi, const PathConfig& cfg,
                      RngState& rng) {
  return SNPathSampler(psi, cfg).draw_expfun(rng);
}
Draw sample_lamperti_path(const SNExponent& psi, double x, double t,
                          const PathConfig& cfg, RngState& rng) {
  return SNPathSampler(psi, cfg).draw_lamperti(x, t, rng);
}
Draw sample_entrance_law(const SNExponent& psi, const PathConfig& cfg,
                         RngState& rng) {
  return SNPathSampler(psi, cfg).draw_entrance(rng);
}
Draw sample_affine_rhs(const SNExponent& psi, double y, const PathConfig& cfg,
                       RngState& rng) {
  return SNPathSampler(psi, cfg).draw_affine_rhs(y, rng);
}

// ---------------------------------------------------------------------------
// Batch driver

SampleBatch sample_batch(const std::function<Draw(RngState&)>& one,
                         const BatchOptions& options, std::string meta) {
  if (options.replicas < 1) {
    throw std::invalid_argument("sample_batch: replicas must be >= 1");
  }
  const int replicas = options.replicas;
  const RngState base(options.seed);
  std::vector<std::vector<double>> values(replicas);
  std::vector<std::size_t> truncated(replicas, 0), warned(replicas, 0);

  auto run_replica = [&](int r) {
    RngState rng = base.substream(
        static_cast<std::uint64_t>(options.batch_id) * kSubstreamStride +
        static_cast<std::uint64_t>(r));
    const std::size_t count =
        options.n / replicas +
        (static_cast<std::size_t>(r) < options.n % replicas ? 1 : 0);
    values[r].reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const Draw d = one(rng);
      if (!std::isfinite(d.value)) {
        throw std::runtime_error("sample_batch: non-finite draw");
      }
      values[r].push_back(d.value);
      truncated[r] += d.truncated ? 1 : 0;
      warned[r] += d.step_warning ? 1 : 0;
    }
  };

  const unsigned hw = std::thread::hardware_concurrency();
  if (hw > 1 && options.n >= 1000) {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(replicas);
    pool.reserve(replicas);
    for (int r = 0; r < replicas; ++r) {
      pool.emplace_back([&, r]() {
        try {
          run_replica(r);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
    for (const auto& err : errors) {
      if (err) {
        std::rethrow_exception(err);
      }
    }
  } else {
    for (int r = 0; r < replicas; ++r) {
      run_replica(r);
    }
  }

  SampleBatch batch;
  batch.seed = options.seed;
  batch.meta = std::move(meta);
  std::size_t total = 0;
  for (int r = 0; r < replicas; ++r) {
    total += values[r].size();
  }
  batch.values.reserve(total);
  for (int r = 0; r < replicas; ++r) {
    batch.values.insert(batch.values.end(), values[r].begin(), values[r].end());
    batch.truncated_count += truncated[r];
    batch.step_warning_count += warned[r];
  }
  return batch;
}

}  // namespace levyexp
