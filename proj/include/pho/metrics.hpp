#pragma once

#include <string>
#include <vector>

namespace pho {

/// Prediction scores paired with ground-truth binary labels.
struct ScoredLabels {
  std::vector<double> scores;
  std::vector<int> labels; // 0/1
};

enum class MetricKind { accuracy, auc };

MetricKind parse_metric_kind(const std::string &name);
std::string to_string(MetricKind kind);

/// Fraction of rows where (score >= threshold) equals the label.
double accuracy(const ScoredLabels &scored, double threshold = 0.5);

/// Area under the ROC curve, computed via the rank-sum formulation with
/// average ranks for ties (equivalent to pairwise counting with ties worth
/// one half). Throws MetricError when labels contain a single class.
double auc_roc(const ScoredLabels &scored);

double evaluate_metric(MetricKind kind, const ScoredLabels &scored);

} // namespace pho
