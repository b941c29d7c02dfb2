#include "pho/stats.hpp"

#include "pho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pho {

namespace {

double sample_mean(const std::vector<double> &v) {
  double sum = 0.0;
  for (double x : v) {
    sum += x;
  }
  return sum / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double> &v, double mean) {
  if (v.size() < 2) {
    return 0.0;
  }
  double ss = 0.0;
  for (double x : v) {
    ss += (x - mean) * (x - mean);
  }
  return ss / static_cast<double>(v.size() - 1);
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int max_iterations = 500;
  constexpr double epsilon = 1e-15;
  constexpr double tiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) {
    d = tiny;
  }
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) {
      d = tiny;
    }
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) {
      c = tiny;
    }
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) {
      d = tiny;
    }
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) {
      c = tiny;
    }
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < epsilon) {
      break;
    }
  }
  return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw ValidationError("incomplete beta requires positive shape parameters");
  }
  if (x <= 0.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // the continued fraction converges fast below the (a+1)/(a+b+2) pivot;
  // use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) above it
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double students_t_two_tailed_p(double t, double df) {
  if (df <= 0.0) {
    throw ValidationError("degrees of freedom must be positive");
  }
  if (std::isinf(t)) {
    return 0.0;
  }
  if (t == 0.0) {
    return 1.0;
  }
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) {
    throw ValidationError("quantile of an empty sample");
  }
  if (q < 0.0 || q > 1.0) {
    throw ValidationError("quantile level must lie in [0, 1]");
  }
  std::sort(samples.begin(), samples.end());
  const double h = q * static_cast<double>(samples.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= samples.size()) {
    return samples.back();
  }
  const double frac = h - static_cast<double>(lo);
  return samples[lo] + frac * (samples[lo + 1] - samples[lo]);
}

Summary summarize(const std::vector<double> &samples) {
  if (samples.empty()) {
    throw ValidationError("cannot summarize an empty sample");
  }
  Summary summary;
  summary.n = samples.size();
  summary.mean = sample_mean(samples);
  summary.sd = std::sqrt(sample_variance(samples, summary.mean));
  summary.median = quantile(samples, 0.5);
  summary.q1 = quantile(samples, 0.25);
  summary.q3 = quantile(samples, 0.75);
  return summary;
}

namespace {

TTestResult finish(double t, double df) {
  TTestResult result;
  result.t_statistic = t;
  result.degrees_of_freedom = df;
  result.p_value = students_t_two_tailed_p(t, df);
  result.significant_at_005 = result.p_value < 0.05;
  return result;
}

} // namespace

TTestResult t_test_two_tailed(const std::vector<double> &a,
                              const std::vector<double> &b,
                              bool pooled_variance) {
  if (a.size() < 2 || b.size() < 2) {
    throw ValidationError("t-test needs at least 2 samples on each side");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double mean_a = sample_mean(a);
  const double mean_b = sample_mean(b);
  const double var_a = sample_variance(a, mean_a);
  const double var_b = sample_variance(b, mean_b);
  const double diff = mean_a - mean_b;

  double se;
  double df;
  if (pooled_variance) {
    df = na + nb - 2.0;
    const double pooled = ((na - 1.0) * var_a + (nb - 1.0) * var_b) / df;
    se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  } else {
    const double ua = var_a / na;
    const double ub = var_b / nb;
    se = std::sqrt(ua + ub);
    df = se == 0.0 ? na + nb - 2.0
                   : (ua + ub) * (ua + ub) /
                         (ua * ua / (na - 1.0) + ub * ub / (nb - 1.0));
  }

  if (se == 0.0) {
    // both samples constant: identical means give the null verbatim,
    // different means are infinitely separated
    if (diff == 0.0) {
      return finish(0.0, df);
    }
    return finish(diff > 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity(),
                  df);
  }
  return finish(diff / se, df);
}

TTestResult t_test_paired(const std::vector<double> &a,
                          const std::vector<double> &b) {
  if (a.size() != b.size()) {
    throw ValidationError("paired t-test needs samples of equal length");
  }
  if (a.size() < 2) {
    throw ValidationError("paired t-test needs at least 2 pairs");
  }
  std::vector<double> diffs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    diffs[i] = a[i] - b[i];
  }
  const double n = static_cast<double>(diffs.size());
  const double mean = sample_mean(diffs);
  const double sd = std::sqrt(sample_variance(diffs, mean));
  const double df = n - 1.0;
  if (sd == 0.0) {
    if (mean == 0.0) {
      return finish(0.0, df);
    }
    return finish(mean > 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity(),
                  df);
  }
  return finish(mean / (sd / std::sqrt(n)), df);
}

} // namespace pho
