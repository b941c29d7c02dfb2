#pragma once

#include "pho/dataset.hpp"
#include "pho/metrics.hpp"
#include "pho/rng.hpp"
#include "pho/trainable.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

namespace pho {

enum class LearnerKind { boosted_stumps, logistic_sgd, analytic, replay };

LearnerKind parse_learner_kind(const std::string &name);
std::string to_string(LearnerKind kind);

/// The immutable data a learner trains and validates on. The validation part
/// is carved from the tail of the (already shuffled) training split so every
/// session of a trial scores against the same rows.
struct LearnerData {
  std::vector<std::vector<double>> train_x;
  std::vector<int> train_y;
  std::vector<std::vector<double>> valid_x;
  std::vector<int> valid_y;
};

/// Splits a training dataset into an inner-train part and a validation part
/// (the last `validation_fraction` of its rows, at least one row each).
LearnerData carve_validation(const Dataset &train, double validation_fraction = 0.2);

/// Gradient-boosted decision stumps for binary classification. One stump is
/// appended per boosting round, fitted by exhaustive least-squares search
/// over all (feature, midpoint) candidates against the negative log-loss
/// gradients of a subsample; leaf values are mean residuals, so the training
/// log-loss is non-increasing per round at subsample 1 and learning rates up
/// to 1. Prediction is sigmoid(base_score + learning_rate * sum of stumps).
///
/// Configuration axes read (defaults in parentheses): learning_rate (0.1),
/// subsample (1.0), min_leaf_weight (0), rounds_cap_fraction (1.0).
/// max_depth is accepted for grid-shape compatibility but stumps are always
/// depth 1. Rounds past round(rounds_cap_fraction * full_budget) leave the
/// model unchanged while still consuming budget, which makes the effective
/// round count a tunable axis under a uniform iteration budget.
class BoostedStumpsLearner : public Learner {
public:
  struct Stump {
    int feature = 0;
    double threshold = 0.0; // x <= threshold goes left
    double left_value = 0.0;
    double right_value = 0.0;
  };

  BoostedStumpsLearner(const Configuration &config,
                       std::shared_ptr<const LearnerData> data,
                       MetricKind metric, int full_budget, std::uint64_t seed);

  double advance_one() override;

  const std::vector<Stump> &stumps() const { return stumps_; }
  double base_score() const { return base_score_; }

private:
  double validation_metric() const;

  std::shared_ptr<const LearnerData> data_;
  MetricKind metric_;
  double learning_rate_;
  double subsample_;
  double min_leaf_weight_;
  int rounds_cap_;
  double base_score_;
  std::vector<Stump> stumps_;
  std::vector<double> train_scores_; // raw log-odds per inner-train row
  std::vector<double> valid_scores_;
  int rounds_done_ = 0;
  Rng rng_;
};

/// Logistic regression trained by mini-batch SGD; one iteration is one full
/// pass over the inner-train rows in shuffled mini-batches. The L2 penalty
/// applies to feature weights only, never the bias.
///
/// Configuration axes read (defaults): learning_rate (0.1), l2_penalty (0),
/// batch_size (32).
class LogisticSgdLearner : public Learner {
public:
  LogisticSgdLearner(const Configuration &config,
                     std::shared_ptr<const LearnerData> data, MetricKind metric,
                     std::uint64_t seed);

  double advance_one() override;

  const std::vector<double> &weights() const { return weights_; }

private:
  std::shared_ptr<const LearnerData> data_;
  MetricKind metric_;
  double learning_rate_;
  double l2_penalty_;
  std::size_t batch_size_;
  std::vector<double> weights_; // one per feature + trailing bias
  Rng rng_;
};

/// Closed-form learning-curve family for oracle tests and fast synthetic
/// experiments: metric(t) = final_value * (1 - exp(-rate * t)) + noise,
/// clamped to [0, 1], with noise drawn i.i.d. N(0, noise_sd) per iteration.
///
/// Configuration axes read: final_value (required), rate (0.25),
/// noise_sd (0).
class AnalyticCurveLearner : public Learner {
public:
  AnalyticCurveLearner(const Configuration &config, std::uint64_t seed);
  AnalyticCurveLearner(double final_value, double rate, double noise_sd,
                       std::uint64_t seed);

  double advance_one() override;

  /// The noise-free closed form at iteration t (1-based).
  static double curve_value(double final_value, double rate, int t);

private:
  double final_value_;
  double rate_;
  double noise_sd_;
  int t_ = 0;
  Rng rng_;
};

/// Per-session knobs shared by a whole tuning run.
struct SessionOptions {
  int full_budget = 20;
  CostMode cost_mode = CostMode::unit;
  MetricKind metric = MetricKind::accuracy;
  std::uint64_t base_seed = 0; // session seed = derive_seed(base_seed, config index)
};

/// Builds ready-to-train sessions for configurations. Each session derives
/// its own random stream from (base_seed, configuration index), so sessions
/// are independent and results do not depend on construction or execution
/// order.
class SessionFactory {
public:
  using MakeLearner =
      std::function<std::unique_ptr<Learner>(const Configuration &, std::uint64_t seed)>;

  SessionFactory(MakeLearner make_learner, SessionOptions options);

  TrainableSession make(const Configuration &config) const;

  int full_budget() const { return options_.full_budget; }
  CostMode cost_mode() const { return options_.cost_mode; }
  const SessionOptions &options() const { return options_; }

private:
  MakeLearner make_learner_;
  SessionOptions options_;
};

/// Factory for the built-in data-driven learners (boosted_stumps,
/// logistic_sgd) and the analytic learner (which ignores `data`; pass
/// nullptr). The replay kind is not constructible here: use
/// make_replay_factory with explicit traces.
SessionFactory make_factory(LearnerKind kind,
                            std::shared_ptr<const LearnerData> data,
                            const SessionOptions &options);

/// Factory replaying a fixed metric sequence per configuration index.
SessionFactory
make_replay_factory(std::map<std::size_t, std::vector<double>> traces,
                    const SessionOptions &options);

} // namespace pho
