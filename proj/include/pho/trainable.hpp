#pragma once

#include "pho/search_space.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace pho {

/// Per-iteration validation metrics and training costs for one model: a
/// learning curve with cost accounting attached.
struct TrainingTrace {
  std::vector<double> metric_by_iteration;     // values in [0, 1]
  std::vector<double> cost_units_by_iteration; // nonnegative
  bool completed = false;                      // trained to the full budget

  std::size_t size() const { return metric_by_iteration.size(); }
  double total_cost() const;
};

/// Writes a trace as CSV with columns iteration,metric,cost_units
/// (iterations 1-based).
void write_trace_csv(std::ostream &out, const TrainingTrace &trace);

/// The incremental-training contract: one call advances the model by exactly
/// one iteration and reports the validation metric afterwards. All state,
/// including any random stream, lives inside the learner, so a sequence of
/// calls yields the same results no matter how it is chunked.
class Learner {
public:
  virtual ~Learner() = default;
  virtual double advance_one() = 0;
};

/// Replays a fixed metric sequence, one value per iteration. Makes learning
/// curves from external measurements usable as fixtures and lets recorded
/// runs be re-fed through the tuner.
class ReplayLearner : public Learner {
public:
  explicit ReplayLearner(std::vector<double> metrics);
  double advance_one() override;

private:
  std::vector<double> metrics_;
  std::size_t position_ = 0;
};

enum class CostMode {
  unit,      // 1 cost unit per iteration: machine-independent budgets
  wall_clock // measured seconds per iteration
};

/// Owns one model's training lifecycle: drives a Learner toward a fixed full
/// budget of iterations, recording the trace and cost as it goes. Sessions
/// are single-owner mutable state; distinct sessions never share anything
/// mutable and may run on concurrent workers.
class TrainableSession {
public:
  TrainableSession(Configuration configuration, int full_budget,
                   std::unique_ptr<Learner> learner,
                   CostMode cost_mode = CostMode::unit);

  /// Advances to exactly `target_iterations`, extending the trace by one
  /// metric and one cost entry per new iteration. A target equal to the
  /// current progress is a no-op; a target below it or above the full budget
  /// throws ValidationError.
  const TrainingTrace &advance(int target_iterations);

  /// The metric recorded after iteration m (1-based). Throws if the session
  /// has not reached m iterations yet.
  double early_metric(int m) const;

  /// The last trace entry; only valid once the session is completed.
  double final_metric() const;

  int iterations_done() const { return iterations_done_; }
  int full_budget() const { return full_budget_; }
  bool completed() const { return trace_.completed; }
  const Configuration &configuration() const { return configuration_; }
  const TrainingTrace &trace() const { return trace_; }

private:
  Configuration configuration_;
  int full_budget_;
  int iterations_done_ = 0;
  TrainingTrace trace_;
  std::unique_ptr<Learner> learner_;
  CostMode cost_mode_;
};

} // namespace pho
