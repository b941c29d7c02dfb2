#include "pho/predictor.hpp"

#include "pho/errors.hpp"

#include <cmath>

namespace pho {

EarlyPredictor fit_early_predictor(const std::vector<std::pair<double, double>> &pairs) {
  if (pairs.size() < 2) {
    throw ValidationError("regression needs at least 2 (early, final) pairs");
  }
  const double n = static_cast<double>(pairs.size());
  double mean_early = 0.0;
  double mean_final = 0.0;
  for (const auto &[early, final] : pairs) {
    mean_early += early;
    mean_final += final;
  }
  mean_early /= n;
  mean_final /= n;

  double ss_early = 0.0;
  double ss_final = 0.0;
  double ss_cross = 0.0;
  for (const auto &[early, final] : pairs) {
    const double de = early - mean_early;
    const double df = final - mean_final;
    ss_early += de * de;
    ss_final += df * df;
    ss_cross += de * df;
  }

  EarlyPredictor predictor;
  predictor.sample_count = pairs.size();
  if (ss_early == 0.0) {
    predictor.degenerate = true;
    return predictor;
  }
  predictor.slope = ss_cross / ss_early;
  predictor.intercept = mean_final - predictor.slope * mean_early;
  predictor.pearson_r =
      ss_final == 0.0 ? 0.0 : ss_cross / std::sqrt(ss_early * ss_final);
  return predictor;
}

double predict(const EarlyPredictor &predictor, double early) {
  if (predictor.degenerate) {
    throw ValidationError("cannot predict with a degenerate regression "
                          "(zero variance in early metrics)");
  }
  return predictor.slope * early + predictor.intercept;
}

double pearson(const std::vector<std::pair<double, double>> &pairs) {
  if (pairs.size() < 2) {
    throw ValidationError("correlation needs at least 2 pairs");
  }
  const double n = static_cast<double>(pairs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto &[x, y] : pairs) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= n;
  mean_y /= n;
  double ss_x = 0.0;
  double ss_y = 0.0;
  double ss_xy = 0.0;
  for (const auto &[x, y] : pairs) {
    ss_x += (x - mean_x) * (x - mean_x);
    ss_y += (y - mean_y) * (y - mean_y);
    ss_xy += (x - mean_x) * (y - mean_y);
  }
  if (ss_x == 0.0 || ss_y == 0.0) {
    throw ValidationError("correlation is undefined when a coordinate has zero variance");
  }
  return ss_xy / std::sqrt(ss_x * ss_y);
}

} // namespace pho
