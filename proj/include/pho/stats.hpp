#pragma once

#include <cstddef>
#include <vector>

namespace pho {

/// Location and spread of a sample. Quartiles and the median use linear
/// interpolation between order statistics (the type-7 convention); sd is the
/// sample standard deviation (n-1 denominator, 0 for a single sample).
struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

Summary summarize(const std::vector<double> &samples);

/// Type-7 quantile of a sample, q in [0, 1].
double quantile(std::vector<double> samples, double q);

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  bool significant_at_005 = false;
};

/// Two-tailed two-sample t-test. Defaults to Welch's unequal-variance form
/// with Welch-Satterthwaite degrees of freedom; `pooled_variance` switches to
/// the classic pooled Student's test (df = na + nb - 2). Each sample needs at
/// least 2 values. When both samples have zero variance and equal means the
/// result is t = 0, p = 1.
TTestResult t_test_two_tailed(const std::vector<double> &a,
                              const std::vector<double> &b,
                              bool pooled_variance = false);

/// Two-tailed paired t-test: a one-sample test of the differences a[i]-b[i]
/// against zero. Requires equal lengths >= 2.
TTestResult t_test_paired(const std::vector<double> &a,
                          const std::vector<double> &b);

/// P(|T| > |t|) for Student's t distribution with df degrees of freedom,
/// evaluated via the regularized incomplete beta function.
double students_t_two_tailed_p(double t, double df);

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation, absolute error <= 1e-10 over the tested domain.
double regularized_incomplete_beta(double a, double b, double x);

} // namespace pho
