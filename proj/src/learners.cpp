#include "pho/learners.hpp"

#include "pho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace pho {

LearnerKind parse_learner_kind(const std::string &name) {
  if (name == "boosted_stumps") {
    return LearnerKind::boosted_stumps;
  }
  if (name == "logistic_sgd") {
    return LearnerKind::logistic_sgd;
  }
  if (name == "analytic") {
    return LearnerKind::analytic;
  }
  if (name == "replay") {
    return LearnerKind::replay;
  }
  throw ValidationError("unknown learner '" + name +
                        "' (expected boosted_stumps|logistic_sgd|analytic|replay)");
}

std::string to_string(LearnerKind kind) {
  switch (kind) {
  case LearnerKind::boosted_stumps:
    return "boosted_stumps";
  case LearnerKind::logistic_sgd:
    return "logistic_sgd";
  case LearnerKind::analytic:
    return "analytic";
  case LearnerKind::replay:
    return "replay";
  }
  return "?";
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamped_log_odds(double p) {
  const double clamped = std::clamp(p, 1e-6, 1.0 - 1e-6);
  return std::log(clamped / (1.0 - clamped));
}

ScoredLabels score_rows(const std::vector<double> &raw_scores,
                        const std::vector<int> &labels) {
  ScoredLabels scored;
  scored.scores.reserve(raw_scores.size());
  for (double z : raw_scores) {
    scored.scores.push_back(sigmoid(z));
  }
  scored.labels = labels;
  return scored;
}

} // namespace

LearnerData carve_validation(const Dataset &train, double validation_fraction) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ValidationError("validation fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = train.row_count();
  if (n < 2) {
    throw ValidationError("need at least 2 training rows to carve a validation set");
  }
  std::size_t valid_count = static_cast<std::size_t>(
      std::llround(validation_fraction * static_cast<double>(n)));
  valid_count = std::clamp<std::size_t>(valid_count, 1, n - 1);
  const std::size_t inner_count = n - valid_count;

  LearnerData data;
  data.train_x.assign(train.features.begin(),
                      train.features.begin() + static_cast<std::ptrdiff_t>(inner_count));
  data.train_y.assign(train.labels.begin(),
                      train.labels.begin() + static_cast<std::ptrdiff_t>(inner_count));
  data.valid_x.assign(train.features.begin() + static_cast<std::ptrdiff_t>(inner_count),
                      train.features.end());
  data.valid_y.assign(train.labels.begin() + static_cast<std::ptrdiff_t>(inner_count),
                      train.labels.end());
  return data;
}

BoostedStumpsLearner::BoostedStumpsLearner(const Configuration &config,
                                           std::shared_ptr<const LearnerData> data,
                                           MetricKind metric, int full_budget,
                                           std::uint64_t seed)
    : data_(std::move(data)), metric_(metric),
      learning_rate_(config.value_or("learning_rate", 0.1)),
      subsample_(config.value_or("subsample", 1.0)),
      min_leaf_weight_(config.value_or("min_leaf_weight", 0.0)), rng_(seed) {
  if (!data_ || data_->train_x.empty() || data_->valid_x.empty()) {
    throw ValidationError("boosted stumps learner needs non-empty train and validation data");
  }
  if (learning_rate_ <= 0.0) {
    throw ValidationError("learning_rate must be positive");
  }
  if (!(subsample_ > 0.0 && subsample_ <= 1.0)) {
    throw ValidationError("subsample must lie in (0, 1]");
  }
  if (min_leaf_weight_ < 0.0) {
    throw ValidationError("min_leaf_weight must be nonnegative");
  }
  const double cap_fraction = config.value_or("rounds_cap_fraction", 1.0);
  if (!(cap_fraction > 0.0 && cap_fraction <= 1.0)) {
    throw ValidationError("rounds_cap_fraction must lie in (0, 1]");
  }
  rounds_cap_ = std::max(1, static_cast<int>(std::llround(
                                cap_fraction * static_cast<double>(full_budget))));

  double positive_rate = 0.0;
  for (int y : data_->train_y) {
    positive_rate += y;
  }
  positive_rate /= static_cast<double>(data_->train_y.size());
  base_score_ = clamped_log_odds(positive_rate);
  train_scores_.assign(data_->train_x.size(), base_score_);
  valid_scores_.assign(data_->valid_x.size(), base_score_);
}

double BoostedStumpsLearner::validation_metric() const {
  return evaluate_metric(metric_, score_rows(valid_scores_, data_->valid_y));
}

double BoostedStumpsLearner::advance_one() {
  ++rounds_done_;
  if (static_cast<int>(stumps_.size()) >= rounds_cap_) {
    // past the configured round cap the model is frozen; the iteration
    // still costs budget at the session level
    return validation_metric();
  }

  const std::size_t n = data_->train_x.size();
  const std::size_t feature_count = data_->train_x[0].size();

  // subsample of row indices for this round
  std::vector<std::size_t> rows;
  const auto wanted = static_cast<std::size_t>(
      std::llround(subsample_ * static_cast<double>(n)));
  if (wanted >= n) {
    rows.resize(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t count = std::max<std::size_t>(1, wanted);
    rows.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.below(all.size() - i));
      std::swap(all[i], all[j]);
      rows.push_back(all[i]);
    }
  }

  // negative log-loss gradients on the subsample
  std::vector<double> residuals(rows.size());
  double residual_sum = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    residuals[i] = static_cast<double>(data_->train_y[rows[i]]) -
                   sigmoid(train_scores_[rows[i]]);
    residual_sum += residuals[i];
  }

  // exhaustive least-squares stump search: every (feature, midpoint between
  // consecutive distinct sorted values) candidate; minimizing the SSE to the
  // residuals is equivalent to maximizing S_L^2/n_L + S_R^2/n_R
  // the fallback when no split qualifies: a constant stump at the mean
  Stump best;
  best.feature = 0;
  best.threshold = std::numeric_limits<double>::infinity();
  best.left_value = residual_sum / static_cast<double>(rows.size());
  best.right_value = best.left_value;
  double best_gain = -std::numeric_limits<double>::infinity();

  std::vector<std::pair<double, double>> sorted; // (feature value, residual)
  sorted.reserve(rows.size());
  for (std::size_t f = 0; f < feature_count; ++f) {
    sorted.clear();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sorted.emplace_back(data_->train_x[rows[i]][f], residuals[i]);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });

    double left_sum = 0.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      left_sum += sorted[i].second;
      if (sorted[i].first == sorted[i + 1].first) {
        continue; // no boundary between equal values
      }
      const double n_left = static_cast<double>(i + 1);
      const double n_right = static_cast<double>(sorted.size() - i - 1);
      if (n_left < min_leaf_weight_ || n_right < min_leaf_weight_) {
        continue;
      }
      const double right_sum = residual_sum - left_sum;
      const double gain =
          left_sum * left_sum / n_left + right_sum * right_sum / n_right;
      if (gain > best_gain) {
        best_gain = gain;
        best.feature = static_cast<int>(f);
        best.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        best.left_value = left_sum / n_left;
        best.right_value = right_sum / n_right;
      }
    }
  }

  stumps_.push_back(best);
  for (std::size_t i = 0; i < n; ++i) {
    const double value = data_->train_x[i][static_cast<std::size_t>(best.feature)] <=
                                 best.threshold
                             ? best.left_value
                             : best.right_value;
    train_scores_[i] += learning_rate_ * value;
  }
  for (std::size_t i = 0; i < valid_scores_.size(); ++i) {
    const double value = data_->valid_x[i][static_cast<std::size_t>(best.feature)] <=
                                 best.threshold
                             ? best.left_value
                             : best.right_value;
    valid_scores_[i] += learning_rate_ * value;
  }
  return validation_metric();
}

LogisticSgdLearner::LogisticSgdLearner(const Configuration &config,
                                       std::shared_ptr<const LearnerData> data,
                                       MetricKind metric, std::uint64_t seed)
    : data_(std::move(data)), metric_(metric),
      learning_rate_(config.value_or("learning_rate", 0.1)),
      l2_penalty_(config.value_or("l2_penalty", 0.0)), rng_(seed) {
  if (!data_ || data_->train_x.empty() || data_->valid_x.empty()) {
    throw ValidationError("logistic learner needs non-empty train and validation data");
  }
  if (learning_rate_ < 0.0) {
    throw ValidationError("learning_rate must be nonnegative");
  }
  if (l2_penalty_ < 0.0) {
    throw ValidationError("l2_penalty must be nonnegative");
  }
  const double batch = config.value_or("batch_size", 32.0);
  if (batch < 1.0) {
    throw ValidationError("batch_size must be at least 1");
  }
  batch_size_ = static_cast<std::size_t>(batch);
  weights_.assign(data_->train_x[0].size() + 1, 0.0); // + bias
}

double LogisticSgdLearner::advance_one() {
  const std::size_t n = data_->train_x.size();
  const std::size_t features = weights_.size() - 1;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng_.shuffle(order);

  // proximal-style decay so extreme penalties shrink weights instead of
  // making the step diverge
  const double decay = std::max(0.0, 1.0 - learning_rate_ * l2_penalty_);

  for (std::size_t start = 0; start < n; start += batch_size_) {
    const std::size_t stop = std::min(n, start + batch_size_);
    std::vector<double> gradient(weights_.size(), 0.0);
    for (std::size_t b = start; b < stop; ++b) {
      const auto &row = data_->train_x[order[b]];
      double z = weights_[features]; // bias
      for (std::size_t f = 0; f < features; ++f) {
        z += weights_[f] * row[f];
      }
      const double error = sigmoid(z) - static_cast<double>(data_->train_y[order[b]]);
      for (std::size_t f = 0; f < features; ++f) {
        gradient[f] += error * row[f];
      }
      gradient[features] += error;
    }
    const double scale = learning_rate_ / static_cast<double>(stop - start);
    for (std::size_t f = 0; f < features; ++f) {
      weights_[f] = weights_[f] * decay - scale * gradient[f];
    }
    weights_[features] -= scale * gradient[features]; // bias is not penalized
  }

  std::vector<double> raw(data_->valid_x.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double z = weights_[features];
    for (std::size_t f = 0; f < features; ++f) {
      z += weights_[f] * data_->valid_x[i][f];
    }
    raw[i] = z;
  }
  return evaluate_metric(metric_, score_rows(raw, data_->valid_y));
}

AnalyticCurveLearner::AnalyticCurveLearner(const Configuration &config,
                                           std::uint64_t seed)
    : AnalyticCurveLearner(config.value_of("final_value"),
                           config.value_or("rate", 0.25),
                           config.value_or("noise_sd", 0.0), seed) {}

AnalyticCurveLearner::AnalyticCurveLearner(double final_value, double rate,
                                           double noise_sd, std::uint64_t seed)
    : final_value_(final_value), rate_(rate), noise_sd_(noise_sd), rng_(seed) {
  if (!(final_value_ >= 0.0 && final_value_ <= 1.0)) {
    throw ValidationError("final_value must lie in [0, 1]");
  }
  if (!(rate_ > 0.0)) {
    throw ValidationError("rate must be positive");
  }
  if (noise_sd_ < 0.0) {
    throw ValidationError("noise_sd must be nonnegative");
  }
}

double AnalyticCurveLearner::curve_value(double final_value, double rate, int t) {
  return final_value * (1.0 - std::exp(-rate * static_cast<double>(t)));
}

double AnalyticCurveLearner::advance_one() {
  ++t_;
  double value = curve_value(final_value_, rate_, t_);
  if (noise_sd_ > 0.0) {
    value += rng_.normal(0.0, noise_sd_);
  }
  return std::clamp(value, 0.0, 1.0);
}

SessionFactory::SessionFactory(MakeLearner make_learner, SessionOptions options)
    : make_learner_(std::move(make_learner)), options_(options) {
  if (!make_learner_) {
    throw ValidationError("session factory needs a learner constructor");
  }
  if (options_.full_budget < 1) {
    throw ValidationError("full budget must be at least 1 iteration");
  }
}

TrainableSession SessionFactory::make(const Configuration &config) const {
  const std::uint64_t seed = derive_seed(options_.base_seed, config.index);
  return TrainableSession(config, options_.full_budget, make_learner_(config, seed),
                          options_.cost_mode);
}

SessionFactory make_factory(LearnerKind kind,
                            std::shared_ptr<const LearnerData> data,
                            const SessionOptions &options) {
  switch (kind) {
  case LearnerKind::boosted_stumps:
    if (!data) {
      throw ValidationError("boosted_stumps needs a dataset");
    }
    return SessionFactory(
        [data, metric = options.metric, budget = options.full_budget](
            const Configuration &config, std::uint64_t seed) -> std::unique_ptr<Learner> {
          return std::make_unique<BoostedStumpsLearner>(config, data, metric, budget, seed);
        },
        options);
  case LearnerKind::logistic_sgd:
    if (!data) {
      throw ValidationError("logistic_sgd needs a dataset");
    }
    return SessionFactory(
        [data, metric = options.metric](const Configuration &config,
                                        std::uint64_t seed) -> std::unique_ptr<Learner> {
          return std::make_unique<LogisticSgdLearner>(config, data, metric, seed);
        },
        options);
  case LearnerKind::analytic:
    return SessionFactory(
        [](const Configuration &config, std::uint64_t seed) -> std::unique_ptr<Learner> {
          return std::make_unique<AnalyticCurveLearner>(config, seed);
        },
        options);
  case LearnerKind::replay:
    throw ValidationError("replay sessions need explicit traces; use make_replay_factory");
  }
  throw ValidationError("unhandled learner kind");
}

SessionFactory
make_replay_factory(std::map<std::size_t, std::vector<double>> traces,
                    const SessionOptions &options) {
  auto shared = std::make_shared<std::map<std::size_t, std::vector<double>>>(std::move(traces));
  return SessionFactory(
      [shared](const Configuration &config, std::uint64_t) -> std::unique_ptr<Learner> {
        const auto it = shared->find(config.index);
        if (it == shared->end()) {
          throw ValidationError("no replay trace for configuration index " +
                                std::to_string(config.index));
        }
        return std::make_unique<ReplayLearner>(it->second);
      },
      options);
}

} // namespace pho
