#include "pho/tuner.hpp"

#include "parallel.hpp"
#include "pho/errors.hpp"
#include "pho/rng.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace pho {

void BudgetLedger::charge(std::size_t configuration_index, double cost) {
  if (cost < 0.0) {
    throw ValidationError("cannot charge a negative cost");
  }
  per_configuration[configuration_index] += cost;
  total_cost_units += cost;
}

namespace {

void validate_params(const PhoParams &params, std::size_t candidate_count,
                     int full_budget) {
  if (params.n < 2) {
    throw ValidationError("n must be at least 2 (the regression needs 2 points)");
  }
  if (params.k < 0) {
    throw ValidationError("k must be nonnegative");
  }
  if (params.m < 1) {
    throw ValidationError("m must be positive");
  }
  if (params.m > full_budget) {
    throw ValidationError("m = " + std::to_string(params.m) +
                          " exceeds the full budget of " + std::to_string(full_budget));
  }
  if (static_cast<std::size_t>(params.n) + static_cast<std::size_t>(params.k) >
      candidate_count) {
    throw ValidationError("n + k = " + std::to_string(params.n + params.k) +
                          " exceeds the " + std::to_string(candidate_count) +
                          " candidates");
  }
  if (params.threads < 1) {
    throw ValidationError("threads must be at least 1");
  }
}

} // namespace

TuneResult pho_tune(const std::vector<Configuration> &candidates,
                    const SessionFactory &factory, const PhoParams &params) {
  validate_params(params, candidates.size(), factory.full_budget());
  const std::size_t candidate_count = candidates.size();
  const auto n = static_cast<std::size_t>(params.n);
  const auto k = static_cast<std::size_t>(params.k);
  const int full_budget = factory.full_budget();

  TuneResult result;

  // step 1: draw n pilot candidates and train each fully, reading its early
  // metric off the same run
  std::vector<std::size_t> positions(candidate_count);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  Rng rng(params.seed);
  std::vector<std::size_t> pilot_positions;
  pilot_positions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(positions.size() - i));
    std::swap(positions[i], positions[j]);
    pilot_positions.push_back(positions[i]);
  }
  std::vector<bool> is_pilot(candidate_count, false);
  for (std::size_t pos : pilot_positions) {
    is_pilot[pos] = true;
  }

  struct PilotRun {
    std::size_t position;
    double early;
    double final_value;
  };
  std::vector<PilotRun> pilots;
  pilots.reserve(n);
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(n);
  for (std::size_t pos : pilot_positions) {
    TrainableSession session = factory.make(candidates[pos]);
    session.advance(full_budget);
    const double early = session.early_metric(params.m);
    const double final_value = session.final_metric();
    pilots.push_back({pos, early, final_value});
    pairs.emplace_back(early, final_value);
    result.ledger.charge(candidates[pos].index, session.trace().total_cost());
    result.traces.emplace(candidates[pos].index, session.trace());
  }

  // step 2: fit the early->final regression on the pilots
  result.predictor = fit_early_predictor(pairs);
  const EarlyPredictor &predictor = *result.predictor;

  // step 3: partially train everything else and predict its final metric.
  // Candidates are processed in ascending configuration order and workers
  // write to per-candidate slots, so the outcome is parallelism-invariant.
  std::vector<std::size_t> remaining;
  remaining.reserve(candidate_count - n);
  for (std::size_t pos = 0; pos < candidate_count; ++pos) {
    if (!is_pilot[pos]) {
      remaining.push_back(pos);
    }
  }
  std::sort(remaining.begin(), remaining.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].index < candidates[b].index;
  });

  struct PartialRun {
    std::size_t position = 0;
    double early = 0.0;
    std::optional<double> predicted;
    double cost_at_m = 0.0;
  };
  std::vector<PartialRun> partials(remaining.size());
  std::vector<std::optional<TrainableSession>> partial_sessions(remaining.size());
  detail::parallel_for(remaining.size(), params.threads, [&](std::size_t i) {
    const std::size_t pos = remaining[i];
    TrainableSession session = factory.make(candidates[pos]);
    session.advance(params.m);
    PartialRun run;
    run.position = pos;
    run.early = session.early_metric(params.m);
    run.cost_at_m = session.trace().total_cost();
    if (!predictor.degenerate) {
      run.predicted = predict(predictor, run.early);
    }
    partials[i] = run;
    partial_sessions[i].emplace(std::move(session));
  });
  for (const auto &run : partials) {
    result.ledger.charge(candidates[run.position].index, run.cost_at_m);
  }

  // step 4: pick the top k by predicted final metric (degenerate regression
  // falls back to the early metric itself; ties break by higher early
  // metric, then lower configuration index) and train them to completion,
  // resuming from the partial state
  std::vector<std::size_t> ranking(partials.size());
  std::iota(ranking.begin(), ranking.end(), std::size_t{0});
  std::sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) {
    const auto &ra = partials[a];
    const auto &rb = partials[b];
    const double pa = ra.predicted.value_or(ra.early);
    const double pb = rb.predicted.value_or(rb.early);
    if (pa != pb) {
      return pa > pb;
    }
    if (ra.early != rb.early) {
      return ra.early > rb.early;
    }
    return candidates[ra.position].index < candidates[rb.position].index;
  });

  struct TopUpRun {
    std::size_t position;
    double final_value;
  };
  std::vector<TopUpRun> topped;
  topped.reserve(k);
  std::vector<bool> is_topped(partials.size(), false);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t slot = ranking[t];
    is_topped[slot] = true;
    TrainableSession &session = *partial_sessions[slot];
    session.advance(full_budget);
    topped.push_back({partials[slot].position, session.final_metric()});
    const std::size_t index = candidates[partials[slot].position].index;
    result.ledger.charge(index, session.trace().total_cost() - partials[slot].cost_at_m);
    result.traces.emplace(index, session.trace());
  }

  // step 5: best of the n + k fully trained models, lowest index on ties
  struct Finalist {
    std::size_t index;
    std::size_t position;
    double final_value;
  };
  std::vector<Finalist> finalists;
  finalists.reserve(n + k);
  for (const auto &run : pilots) {
    finalists.push_back({candidates[run.position].index, run.position, run.final_value});
  }
  for (const auto &run : topped) {
    finalists.push_back({candidates[run.position].index, run.position, run.final_value});
  }
  const auto best = std::min_element(
      finalists.begin(), finalists.end(), [](const Finalist &a, const Finalist &b) {
        if (a.final_value != b.final_value) {
          return a.final_value > b.final_value;
        }
        return a.index < b.index;
      });
  result.best_configuration = candidates[best->position];
  result.best_final_metric = best->final_value;

  // outcome rows and the fully/partial index sets
  for (const auto &run : pilots) {
    CandidateOutcome outcome;
    outcome.index = candidates[run.position].index;
    outcome.early = run.early;
    if (!predictor.degenerate) {
      outcome.predicted = predict(predictor, run.early);
    }
    outcome.final = run.final_value;
    outcome.fully_trained = true;
    outcome.pilot = true;
    result.outcomes.push_back(outcome);
    result.fully_trained.push_back(outcome.index);
  }
  for (std::size_t i = 0; i < partials.size(); ++i) {
    CandidateOutcome outcome;
    outcome.index = candidates[partials[i].position].index;
    outcome.early = partials[i].early;
    outcome.predicted = partials[i].predicted;
    outcome.fully_trained = is_topped[i];
    if (is_topped[i]) {
      result.fully_trained.push_back(outcome.index);
    } else {
      result.partially_trained_only.push_back(outcome.index);
    }
    result.outcomes.push_back(outcome);
  }
  for (const auto &run : topped) {
    const std::size_t index = candidates[run.position].index;
    for (auto &outcome : result.outcomes) {
      if (outcome.index == index) {
        outcome.final = run.final_value;
      }
    }
  }
  std::sort(result.outcomes.begin(), result.outcomes.end(),
            [](const CandidateOutcome &a, const CandidateOutcome &b) {
              return a.index < b.index;
            });
  std::sort(result.fully_trained.begin(), result.fully_trained.end());
  std::sort(result.partially_trained_only.begin(), result.partially_trained_only.end());
  return result;
}

} // namespace pho
