#pragma once

#include "pho/baselines.hpp"
#include "pho/dataset.hpp"
#include "pho/learners.hpp"
#include "pho/predictor.hpp"
#include "pho/stats.hpp"
#include "pho/tuner.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pho {

/// Parameters of the built-in synthetic two-Gaussian dataset. The dataset is
/// generated once per experiment; only the train/test split is regenerated
/// across trials.
struct SyntheticSpec {
  std::size_t rows = 300;
  std::size_t features = 4;
  double separation = 1.5;
  std::uint64_t seed = 1;
};

/// A CSV-backed dataset source.
struct DatasetSource {
  std::string path;
  std::string label_column;
  std::string positive_label;
  char delimiter = ',';
};

/// Everything needed to run tuners and the comparison harness. Mirrors the
/// JSON config file field for field; CLI flags override individual entries.
struct ExperimentConfig {
  LearnerKind learner = LearnerKind::boosted_stumps;
  std::string space_file = "default"; // path, or "default" for the built-in grid
  std::optional<DatasetSource> dataset; // absent -> synthetic
  SyntheticSpec synthetic;
  MetricKind metric = MetricKind::accuracy;
  PhoParams pho; // n, m, k, threads (per-trial seeds are derived)
  int full_budget = 20;
  std::size_t trials = 200;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.67;
  double validation_fraction = 0.2;
  bool stratified = false;
  CostMode cost_mode = CostMode::unit;
  bool pooled_t_test = false;
  std::string output_dir = "out";

  static ExperimentConfig from_json_text(const std::string &text,
                                         const std::string &origin = "<string>");
  static ExperimentConfig from_json_file(const std::string &path);
};

/// Derived-seed streams, one block of four per trial: split, tuner draw,
/// random-search draw, session base. Single runs use the trial-0 block, so a
/// lone `tune pho` reproduces trial 0 of a comparison with the same seed.
enum class SeedStream : std::uint64_t { split = 0, tuner = 1, search = 2, sessions = 3 };

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial, SeedStream stream);

SearchSpace load_space(const ExperimentConfig &config);
Dataset load_dataset(const ExperimentConfig &config);

/// A prepared trial: the seeded split's carved training data wrapped in a
/// session factory. When the metric is AUC and the carved validation rows
/// come out single-class, the split is resampled with a derived seed (bounded
/// retries); `split_seed` reports the seed actually used.
struct TrialSetup {
  SessionFactory factory;
  std::uint64_t split_seed;
  std::size_t resample_attempts = 0;
};

TrialSetup prepare_trial(const ExperimentConfig &config, const Dataset &dataset,
                         std::size_t trial);

struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t split_seed = 0;
  double pho_best = 0.0;
  double rs_best = 0.0;
  double pho_budget = 0.0;
  std::size_t rs_models_evaluated = 0;
  bool rs_budget_overrun = false;
  EarlyPredictor predictor;
};

struct TrialFailure {
  std::size_t trial = 0;
  std::string message;
};

struct ComparisonReport {
  std::vector<TrialRow> rows; // ordered by trial index
  std::vector<TrialFailure> failures;
  Summary pho_summary;
  Summary rs_summary;
  double mean_difference = 0.0; // pho - rs
  // absent when fewer than 2 trials succeeded
  std::optional<TTestResult> welch;
  std::optional<TTestResult> paired;
  std::optional<TTestResult> pooled;
  std::size_t negative_slope_trials = 0;
  // figure sources, from the first successful trial
  std::optional<TuneResult> first_trial_pho;
  std::vector<PoolEntry> first_trial_pool;
};

/// Runs the paired experiment: per trial, resplit with a derived seed, run
/// the predictive tuner, read its ledger total, then give random search that
/// exact budget on the same split; afterwards summarize both sides and test
/// the paired and unpaired differences. A failed trial is recorded and
/// skipped; more than 10% failures aborts with an Error. Also fully
/// evaluates the candidate pool on the first trial's split to provide the
/// cumulative-histogram figure data.
ComparisonReport run_comparison(const ExperimentConfig &config);

/// Single runs using the trial-0 seed block.
TuneResult run_pho_once(const ExperimentConfig &config);
TuneResult run_random_search_once(const ExperimentConfig &config, double budget);
std::vector<PoolEntry> run_pool_once(const ExperimentConfig &config);

} // namespace pho
