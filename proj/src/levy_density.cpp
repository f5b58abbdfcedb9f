#include "levyexp/levy_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levyexp/quadrature.hpp"
#include "levyexp/specfun.hpp"

namespace levyexp {

namespace detail {

class DensityImpl {
 public:
  virtual ~DensityImpl() = default;
  virtual double log_value(double r) const = 0;
  virtual double neg_log_derivative(double r) const = 0;
  virtual std::optional<double> closed_tail(double) const { return {}; }
  virtual std::optional<double> closed_inverse_tail(double mass) const {
    (void)mass;
    return {};
  }
  virtual std::optional<double> closed_small_jump_drift(double eps) const {
    (void)eps;
    return {};
  }
  virtual const std::string& describe() const = 0;
};

namespace {

class ExponentialJump final : public DensityImpl {
 public:
  ExponentialJump(double lambda, double rho)
      : lambda_(lambda), rho_(rho),
        label_("exponential-jump(lambda=" + std::to_string(lambda) +
               ",rho=" + std::to_string(rho) + ")") {
    if (!(lambda > 0.0) || !(rho > 0.0)) {
      throw std::invalid_argument("exponential_jump: lambda, rho must be > 0");
    }
  }
  double log_value(double r) const override {
    return std::log(lambda_ * rho_) - rho_ * r;
  }
  double neg_log_derivative(double) const override { return rho_; }
  std::optional<double> closed_tail(double r) const override {
    return lambda_ * std::exp(-rho_ * r);
  }
  std::optional<double> closed_inverse_tail(double mass) const override {
    return std::log(lambda_ / mass) / rho_;
  }
  std::optional<double> closed_small_jump_drift(double eps) const override {
    // lambda rho \int_0^eps r e^{-rho r} dr
    const double z = rho_ * eps;
    // 1 - e^{-z}(1+z), evaluated stably for small z.
    double core;
    if (z < 1e-4) {
      core = 0.5 * z * z * (1.0 - 2.0 * z / 3.0 + 0.25 * z * z);
    } else {
      core = 1.0 - std::exp(-z) * (1.0 + z);
    }
    return lambda_ / rho_ * core;
  }
  const std::string& describe() const override { return label_; }

 private:
  double lambda_, rho_;
  std::string label_;
};

class StableExample final : public DensityImpl {
 public:
  explicit StableExample(double alpha)
      : alpha_(alpha), log_gamma_one_minus_(log_gamma(1.0 - alpha)),
        label_("stable-example(alpha=" + std::to_string(alpha) + ")") {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
      throw std::invalid_argument("stable_example: alpha must be in (0,1)");
    }
  }
  double log_value(double r) const override {
    const double z = r / alpha_;
    // log(1 - e^{-z}) computed through expm1 to keep precision near 0.
    const double log1me = std::log(-std::expm1(-z));
    return -z - log_gamma_one_minus_ - (alpha_ + 1.0) * log1me;
  }
  double neg_log_derivative(double r) const override {
    // -dlog f/dr = (1/alpha) (1 + (alpha+1) / (e^{r/alpha} - 1))
    const double em1 = std::expm1(r / alpha_);
    return (1.0 + (alpha_ + 1.0) / em1) / alpha_;
  }
  std::optional<double> closed_tail(double r) const override {
    // ((1 - e^{-r/alpha})^{-alpha} - 1) / Gamma(1-alpha)
    const double base = -std::expm1(-r / alpha_);
    return std::expm1(-alpha_ * std::log(base)) *
           std::exp(-log_gamma_one_minus_);
  }
  std::optional<double> closed_inverse_tail(double mass) const override {
    const double g = std::exp(log_gamma_one_minus_);
    const double base = std::pow(1.0 + g * mass, -1.0 / alpha_);
    return -alpha_ * std::log1p(-base);
  }
  const std::string& describe() const override { return label_; }

 private:
  double alpha_, log_gamma_one_minus_;
  std::string label_;
};

class DualExample final : public DensityImpl {
 public:
  explicit DualExample(double alpha)
      : alpha_(alpha), log_gamma_plus_(log_gamma(alpha + 1.0)),
        label_("dual-example(alpha=" + std::to_string(alpha) + ")") {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
      throw std::invalid_argument("dual_example: alpha must be in (0,1)");
    }
  }
  double log_value(double r) const override {
    const double z = r / alpha_;
    // log(e^{z} - 1) = z + log(1 - e^{-z})
    const double log_em1 = z + std::log(-std::expm1(-z));
    return 2.0 * std::log1p(-alpha_) + z - std::log(alpha_) -
           log_gamma_plus_ - (2.0 - alpha_) * log_em1;
  }
  double neg_log_derivative(double r) const override {
    // (1/alpha) ((2-alpha)/(1-e^{-r/alpha}) - 1)
    const double denom = -std::expm1(-r / alpha_);
    return ((2.0 - alpha_) / denom - 1.0) / alpha_;
  }
  std::optional<double> closed_tail(double r) const override {
    // (1-alpha) (e^{r/alpha} - 1)^{alpha-1} / Gamma(alpha+1)
    const double z = r / alpha_;
    const double log_em1 = z + std::log(-std::expm1(-z));
    return std::exp(std::log1p(-alpha_) + (alpha_ - 1.0) * log_em1 -
                    log_gamma_plus_);
  }
  std::optional<double> closed_inverse_tail(double mass) const override {
    // e^{r/alpha} - 1 = ((1-alpha) / (Gamma(alpha+1) mass))^{1/(1-alpha)}
    const double log_em1 =
        (std::log1p(-alpha_) - log_gamma_plus_ - std::log(mass)) /
        (1.0 - alpha_);
    return alpha_ * (log_em1 < 30.0 ? std::log1p(std::exp(log_em1))
                                    : log_em1 + std::exp(-log_em1));
  }
  const std::string& describe() const override { return label_; }

 private:
  double alpha_, log_gamma_plus_;
  std::string label_;
};

class Tabulated final : public DensityImpl {
 public:
  Tabulated(std::vector<double> r, std::vector<double> f)
      : label_("tabulated(" + std::to_string(r.size()) + " points)") {
    if (r.size() != f.size() || r.size() < 2) {
      throw std::invalid_argument("tabulated: need >= 2 matching points");
    }
    log_r_.reserve(r.size());
    log_f_.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(r[i] > 0.0) || !(f[i] > 0.0) || !std::isfinite(r[i]) ||
          !std::isfinite(f[i])) {
        throw std::invalid_argument("tabulated: points must be finite, > 0");
      }
      if (i > 0 && !(r[i] > r[i - 1])) {
        throw std::invalid_argument("tabulated: abscissae must increase");
      }
      log_r_.push_back(std::log(r[i]));
      log_f_.push_back(std::log(f[i]));
    }
    slopes_.resize(r.size() - 1);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      slopes_[i] = (log_f_[i + 1] - log_f_[i]) / (log_r_[i + 1] - log_r_[i]);
    }
  }

  double log_value(double r) const override {
    const double lr = std::log(r);
    const std::size_t i = segment_of(lr);
    return log_f_[i] + slopes_[i] * (lr - log_r_[i]);
  }

  double neg_log_derivative(double r) const override {
    const double lr = std::log(r);
    return -slopes_[segment_of(lr)] / r;
  }

  const std::string& describe() const override { return label_; }

  double last_slope() const { return slopes_.back(); }

 private:
  std::size_t segment_of(double lr) const {
    if (lr <= log_r_.front()) {
      return 0;
    }
    if (lr >= log_r_.back()) {
      return slopes_.size() - 1;
    }
    const auto it = std::upper_bound(log_r_.begin(), log_r_.end(), lr);
    return static_cast<std::size_t>(it - log_r_.begin()) - 1;
  }

  std::vector<double> log_r_, log_f_, slopes_;
  std::string label_;
};

class Custom final : public DensityImpl {
 public:
  Custom(std::function<double(double)> log_value,
         std::function<double(double)> neg_log_derivative,
         std::function<double(double)> tail, std::string description)
      : log_value_(std::move(log_value)),
        neg_log_derivative_(std::move(neg_log_derivative)),
        tail_(std::move(tail)), label_(std::move(description)) {
    if (!log_value_) {
      throw std::invalid_argument("custom density: log_value required");
    }
  }
  double log_value(double r) const override { return log_value_(r); }
  double neg_log_derivative(double r) const override {
    if (neg_log_derivative_) {
      return neg_log_derivative_(r);
    }
    // Central difference of log f at a relative step.
    const double h = 1e-5 * std::max(r, 1e-8);
    return -(log_value_(r + h) - log_value_(std::max(r - h, r * 0.5))) /
           (h + std::min(h, r * 0.5));
  }
  std::optional<double> closed_tail(double r) const override {
    if (tail_) {
      return tail_(r);
    }
    return {};
  }
  const std::string& describe() const override { return label_; }

 private:
  std::function<double(double)> log_value_, neg_log_derivative_, tail_;
  std::string label_;
};

}  // namespace
}  // namespace detail

LevyDensity::LevyDensity(std::shared_ptr<const detail::DensityImpl> impl)
    : impl_(std::move(impl)) {}

LevyDensity LevyDensity::exponential_jump(double lambda, double rho) {
  return LevyDensity(std::make_shared<detail::ExponentialJump>(lambda, rho));
}
LevyDensity LevyDensity::stable_example(double alpha) {
  return LevyDensity(std::make_shared<detail::StableExample>(alpha));
}
LevyDensity LevyDensity::dual_example(double alpha) {
  return LevyDensity(std::make_shared<detail::DualExample>(alpha));
}
LevyDensity LevyDensity::tabulated(std::vector<double> abscissae,
                                   std::vector<double> values) {
  return LevyDensity(std::make_shared<detail::Tabulated>(std::move(abscissae),
                                                         std::move(values)));
}
LevyDensity LevyDensity::custom(std::function<double(double)> log_value,
                                std::function<double(double)> neg_log_derivative,
                                std::function<double(double)> tail,
                                std::string description) {
  return LevyDensity(std::make_shared<detail::Custom>(
      std::move(log_value), std::move(neg_log_derivative), std::move(tail),
      std::move(description)));
}

double LevyDensity::value(double r) const { return std::exp(impl_->log_value(r)); }
double LevyDensity::log_value(double r) const { return impl_->log_value(r); }
double LevyDensity::neg_log_derivative(double r) const {
  return impl_->neg_log_derivative(r);
}
double LevyDensity::derivative(double r) const {
  return -value(r) * impl_->neg_log_derivative(r);
}

double LevyDensity::tail(double r) const {
  if (auto t = impl_->closed_tail(r)) {
    return *t;
  }
  const auto& impl = *impl_;
  return integrate_right_tail(
      [&impl](double s) { return std::exp(impl.log_value(s)); }, r);
}

bool LevyDensity::has_closed_inverse_tail() const {
  return impl_->closed_inverse_tail(1.0).has_value();
}

double LevyDensity::inverse_tail(double mass) const {
  if (!(mass > 0.0)) {
    throw std::domain_error("inverse_tail: mass must be > 0");
  }
  if (auto r = impl_->closed_inverse_tail(mass)) {
    return *r;
  }
  // Bracket then bisect on the (decreasing) tail.
  double lo = 1.0, hi = 1.0;
  while (tail(lo) < mass) {
    lo *= 0.5;
    if (lo < 1e-300) {
      throw QuadratureError("inverse_tail: mass exceeds total activity");
    }
  }
  while (tail(hi) > mass) {
    hi *= 2.0;
    if (hi > 1e300) {
      throw QuadratureError("inverse_tail: tail does not reach mass");
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > mass ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double LevyDensity::small_jump_drift(double eps) const {
  if (!(eps > 0.0)) {
    return 0.0;
  }
  if (auto d = impl_->closed_small_jump_drift(eps)) {
    return *d;
  }
  // \int_0^eps r f(r) dr via t = log r; integrand exp(log f + 2t).
  const auto& impl = *impl_;
  return integrate_left_tail(
      [&impl](double t) {
        const double r = std::exp(t);
        return std::exp(impl.log_value(r) + 2.0 * t);
      },
      std::log(eps));
}

double LevyDensity::one_wedge_mass() const {
  return small_jump_drift(1.0) + tail(1.0);
}

bool LevyDensity::decreasing_on_grid(int n, double lo, double hi) const {
  const double step = std::log(hi / lo) / (n - 1);
  double prev = impl_->log_value(lo);
  for (int i = 1; i < n; ++i) {
    const double cur = impl_->log_value(lo * std::exp(step * i));
    if (cur > prev + 1e-12) {
      return false;
    }
    prev = cur;
  }
  return true;
}

const std::string& LevyDensity::describe() const { return impl_->describe(); }

}  // namespace levyexp
