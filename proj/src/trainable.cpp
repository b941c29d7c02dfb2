#include "pho/trainable.hpp"

#include "pho/errors.hpp"
#include "pho/reporting.hpp"

#include <chrono>
#include <ostream>

namespace pho {

double TrainingTrace::total_cost() const {
  double total = 0.0;
  for (double c : cost_units_by_iteration) {
    total += c;
  }
  return total;
}

void write_trace_csv(std::ostream &out, const TrainingTrace &trace) {
  out << "iteration,metric,cost_units\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << (i + 1) << ',' << format_double(trace.metric_by_iteration[i]) << ','
        << format_double(trace.cost_units_by_iteration[i]) << '\n';
  }
}

ReplayLearner::ReplayLearner(std::vector<double> metrics)
    : metrics_(std::move(metrics)) {
  if (metrics_.empty()) {
    throw ValidationError("replay learner needs a non-empty metric sequence");
  }
}

double ReplayLearner::advance_one() {
  if (position_ >= metrics_.size()) {
    throw ValidationError("replay learner exhausted after " +
                          std::to_string(metrics_.size()) + " iterations");
  }
  return metrics_[position_++];
}

TrainableSession::TrainableSession(Configuration configuration, int full_budget,
                                   std::unique_ptr<Learner> learner,
                                   CostMode cost_mode)
    : configuration_(std::move(configuration)), full_budget_(full_budget),
      learner_(std::move(learner)), cost_mode_(cost_mode) {
  if (full_budget_ < 1) {
    throw ValidationError("full budget must be at least 1 iteration");
  }
  if (!learner_) {
    throw ValidationError("session needs a learner");
  }
}

const TrainingTrace &TrainableSession::advance(int target_iterations) {
  if (target_iterations > full_budget_) {
    throw ValidationError("target " + std::to_string(target_iterations) +
                          " exceeds the full budget of " + std::to_string(full_budget_));
  }
  if (target_iterations < iterations_done_) {
    throw ValidationError("cannot rewind training from " +
                          std::to_string(iterations_done_) + " to " +
                          std::to_string(target_iterations) + " iterations");
  }
  while (iterations_done_ < target_iterations) {
    const auto start = std::chrono::steady_clock::now();
    const double metric = learner_->advance_one();
    const auto stop = std::chrono::steady_clock::now();
    if (!(metric >= 0.0 && metric <= 1.0)) {
      throw ValidationError("learner reported metric " + std::to_string(metric) +
                            " outside [0, 1]");
    }
    const double cost =
        cost_mode_ == CostMode::unit
            ? 1.0
            : std::chrono::duration<double>(stop - start).count();
    trace_.metric_by_iteration.push_back(metric);
    trace_.cost_units_by_iteration.push_back(cost);
    ++iterations_done_;
  }
  trace_.completed = iterations_done_ == full_budget_;
  return trace_;
}

double TrainableSession::early_metric(int m) const {
  if (m < 1) {
    throw ValidationError("iteration index must be >= 1");
  }
  if (m > iterations_done_) {
    throw ValidationError("metric after iteration " + std::to_string(m) +
                          " requested but only " + std::to_string(iterations_done_) +
                          " iterations are done");
  }
  return trace_.metric_by_iteration[static_cast<std::size_t>(m - 1)];
}

double TrainableSession::final_metric() const {
  if (!trace_.completed) {
    throw ValidationError("final metric requested before training completed");
  }
  return trace_.metric_by_iteration.back();
}

} // namespace pho
