#include "levyexp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levyexp/specfun.hpp"

namespace levyexp {

MomentReport empirical_moments(const std::vector<double>& values,
                               const std::vector<int>& orders,
                               const std::vector<double>& analytic,
                               double z_threshold) {
  if (values.empty()) {
    throw std::invalid_argument("empirical_moments: empty batch");
  }
  if (orders.size() != analytic.size()) {
    throw std::invalid_argument("empirical_moments: orders/targets mismatch");
  }
  MomentReport report;
  report.z_threshold = z_threshold;
  report.pass = true;
  const double n = static_cast<double>(values.size());
  for (std::size_t k = 0; k < orders.size(); ++k) {
    double sum = 0.0, sum_sq = 0.0;
    for (double v : values) {
      const double p = std::pow(v, orders[k]);
      sum += p;
      sum_sq += p * p;
    }
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    const double se = values.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    MomentRow row{orders[k], analytic[k], mean, se, 0.0};
    if (se > 0.0) {
      row.z = (mean - analytic[k]) / se;
    } else {
      const double scale = std::max(std::abs(analytic[k]), 1.0);
      row.z = std::abs(mean - analytic[k]) <= 1e-12 * scale
                  ? 0.0
                  : std::numeric_limits<double>::infinity();
    }
    if (!(std::abs(row.z) <= z_threshold)) {
      report.pass = false;
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace {

void require_size(std::size_t n, const char* what) {
  if (n < 100) {
    throw std::invalid_argument(std::string(what) +
                                ": batch must have >= 100 values");
  }
}

}  // namespace

KSReport ks_test_cdf(const std::vector<double>& values,
                     const std::function<double(double)>& cdf,
                     double p_threshold, const std::string& label) {
  require_size(values.size(), "ks_test_cdf");
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, (i + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  KSReport report;
  report.label = label;
  report.statistic = d;
  report.n1 = sorted.size();
  report.p_value = kolmogorov_sf(std::sqrt(n) * d);
  report.p_threshold = p_threshold;
  report.pass = report.p_value > p_threshold;
  return report;
}

KSReport ks_test_exp1(const std::vector<double>& values, double p_threshold) {
  return ks_test_cdf(
      values, [](double x) { return x > 0.0 ? -std::expm1(-x) : 0.0; },
      p_threshold, "one-sample vs Exp(1)");
}

KSReport ks_two_sample(const std::vector<double>& a,
                       const std::vector<double>& b, double p_threshold,
                       const std::string& label) {
  require_size(a.size(), "ks_two_sample");
  require_size(b.size(), "ks_two_sample");
  std::vector<double> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) {
      ++i;
    }
    while (j < sb.size() && sb[j] <= x) {
      ++j;
    }
    d = std::max(d, std::abs(i / na - j / nb));
  }
  KSReport report;
  report.label = label;
  report.statistic = d;
  report.n1 = sa.size();
  report.n2 = sb.size();
  report.p_value = kolmogorov_sf(std::sqrt(na * nb / (na + nb)) * d);
  report.p_threshold = p_threshold;
  report.pass = report.p_value > p_threshold;
  return report;
}

}  // namespace levyexp
