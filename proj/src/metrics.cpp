#include "pho/metrics.hpp"

#include "pho/errors.hpp"

#include <algorithm>
#include <numeric>

namespace pho {

MetricKind parse_metric_kind(const std::string &name) {
  if (name == "accuracy") {
    return MetricKind::accuracy;
  }
  if (name == "auc") {
    return MetricKind::auc;
  }
  throw ValidationError("unknown metric '" + name + "' (expected accuracy|auc)");
}

std::string to_string(MetricKind kind) {
  return kind == MetricKind::accuracy ? "accuracy" : "auc";
}

namespace {

void check(const ScoredLabels &scored) {
  if (scored.scores.empty()) {
    throw ValidationError("metric input is empty");
  }
  if (scored.scores.size() != scored.labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
}

} // namespace

double accuracy(const ScoredLabels &scored, double threshold) {
  check(scored);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scored.scores.size(); ++i) {
    const int predicted = scored.scores[i] >= threshold ? 1 : 0;
    if (predicted == scored.labels[i]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(scored.scores.size());
}

double auc_roc(const ScoredLabels &scored) {
  check(scored);
  const std::size_t n = scored.scores.size();
  const std::size_t positives =
      static_cast<std::size_t>(std::count(scored.labels.begin(), scored.labels.end(), 1));
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw MetricError("AUC is undefined on single-class labels");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scored.scores[a] < scored.scores[b];
  });

  // rank-sum with average ranks over tied score groups
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scored.scores[order[j]] == scored.scores[order[i]]) {
      ++j;
    }
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j); // 1-based
    for (std::size_t t = i; t < j; ++t) {
      if (scored.labels[order[t]] == 1) {
        positive_rank_sum += average_rank;
      }
    }
    i = j;
  }

  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) /
         (p * static_cast<double>(negatives));
}

double evaluate_metric(MetricKind kind, const ScoredLabels &scored) {
  return kind == MetricKind::accuracy ? accuracy(scored) : auc_roc(scored);
}

} // namespace pho
