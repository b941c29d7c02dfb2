#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace pho {

/// Simple linear regression mapping a model's early validation metric to its
/// final one, fitted by closed-form ordinary least squares on the pilot runs.
/// `degenerate` is set when the early metrics have zero variance; slope and
/// intercept are then meaningless and callers rank by the early metric
/// directly instead of calling predict().
struct EarlyPredictor {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson_r = 0.0;
  std::size_t sample_count = 0;
  bool degenerate = false;
};

/// Fits OLS on (early, final) pairs: slope = cov(early, final) / var(early),
/// intercept = mean(final) - slope * mean(early). Requires at least 2 pairs.
EarlyPredictor fit_early_predictor(const std::vector<std::pair<double, double>> &pairs);

/// slope * early + intercept, deliberately not clamped to [0, 1]: downstream
/// selection only uses the ranking and clamping could create artificial
/// ties. Throws ValidationError on a degenerate predictor.
double predict(const EarlyPredictor &predictor, double early);

/// Pearson product-moment correlation. Throws ValidationError when either
/// coordinate has zero variance or fewer than 2 pairs are given.
double pearson(const std::vector<std::pair<double, double>> &pairs);

} // namespace pho
