#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace levyexp {

struct KSReport {
  std::string label;
  double statistic = 0.0;
  std::size_t n1 = 0, n2 = 0;  // n2 == 0 for one-sample tests
  double p_value = 0.0;
  double p_threshold = 0.0;
  bool pass = false;
};

struct MomentRow {
  int order = 0;  // negative orders are reciprocal moments
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double z = 0.0;
};

struct MomentReport {
  std::vector<MomentRow> rows;
  double z_threshold = 0.0;
  bool pass = false;
};

// Sample means of x^n with SE = sample std / sqrt(N); z against the given
// analytic targets. A constant batch (SE = 0) passes exactly when the
// empirical value matches the target to 1e-12 relative.
MomentReport empirical_moments(const std::vector<double>& values,
                               const std::vector<int>& orders,
                               const std::vector<double>& analytic,
                               double z_threshold);

// One-sample Kolmogorov-Smirnov against a cdf; p through the asymptotic
// Kolmogorov survival function at sqrt(n) D.
KSReport ks_test_cdf(const std::vector<double>& values,
                     const std::function<double(double)>& cdf,
                     double p_threshold, const std::string& label);

// Against Exp(1): cdf 1 - e^{-x}.
KSReport ks_test_exp1(const std::vector<double>& values, double p_threshold);

// Two-sample statistic with pooled scaling sqrt(nm/(n+m)); ties handled by
// advancing both empirical cdfs before comparing.
KSReport ks_two_sample(const std::vector<double>& a,
                       const std::vector<double>& b, double p_threshold,
                       const std::string& label);

}  // namespace levyexp
