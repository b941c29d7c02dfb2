#pragma once

#include "pho/learners.hpp"
#include "pho/predictor.hpp"
#include "pho/search_space.hpp"
#include "pho/trainable.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace pho {

/// Parameters of the predictive tuning run: n pilot models trained fully up
/// front, m iterations of partial training for everything else, k predicted
/// top models trained fully at the end. k = 0 is allowed for the edge where
/// the pilots already cover the whole grid.
struct PhoParams {
  int n = 5;
  int m = 2;
  int k = 5;
  std::uint64_t seed = 0;
  int threads = 1; // workers for the partial-training phase
};

/// Deterministic cost accounting: total training cost and its breakdown per
/// configuration index.
struct BudgetLedger {
  double total_cost_units = 0.0;
  std::map<std::size_t, double> per_configuration;

  /// Adds `cost` to one configuration's entry and to the total. Negative
  /// costs throw ValidationError.
  void charge(std::size_t configuration_index, double cost);
};

/// Per-candidate record of what the tuner observed: the early metric (for
/// every candidate it touched), the predicted final metric where a predictor
/// was applied, and the actual final metric where the model was fully
/// trained.
struct CandidateOutcome {
  std::size_t index = 0;
  std::optional<double> early;
  std::optional<double> predicted;
  std::optional<double> final;
  bool fully_trained = false;
  bool pilot = false;
};

struct TuneResult {
  Configuration best_configuration;
  double best_final_metric = 0.0;
  std::vector<std::size_t> fully_trained;          // ascending
  std::vector<std::size_t> partially_trained_only; // ascending
  std::optional<EarlyPredictor> predictor;
  BudgetLedger ledger;
  std::vector<CandidateOutcome> outcomes;        // ascending by index
  std::map<std::size_t, TrainingTrace> traces;   // fully trained models only
  bool budget_overrun = false;                   // see random_search
};

/// Predictive tuning over a candidate list:
///   1. draw n candidates at random and train them fully, recording each
///      one's metric after m iterations and at completion;
///   2. fit the early->final regression on those n pairs;
///   3. train every remaining candidate to m iterations and predict its
///      final metric;
///   4. fully train the top k by predicted final metric (ties: higher early
///      metric, then lower configuration index), resuming from the partial
///      state;
///   5. return the best of the n + k fully trained models (ties: lowest
///      configuration index).
///
/// Exactly n + k candidates end up fully trained and the other
/// |candidates| - n - k only partially. If the fitted predictor is
/// degenerate (zero early-metric variance), step 4 ranks by the early metric
/// directly. The partial-training phase may run on params.threads workers;
/// results are merged in configuration order so the outcome is independent
/// of scheduling.
TuneResult pho_tune(const std::vector<Configuration> &candidates,
                    const SessionFactory &factory, const PhoParams &params);

} // namespace pho
