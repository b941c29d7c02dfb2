#include "pho/baselines.hpp"

#include "parallel.hpp"
#include "pho/errors.hpp"
#include "pho/rng.hpp"

#include <algorithm>
#include <numeric>

namespace pho {

TuneResult random_search(const std::vector<Configuration> &candidates,
                         const SessionFactory &factory, double budget,
                         std::uint64_t seed) {
  if (candidates.empty()) {
    throw ValidationError("random search needs at least one candidate");
  }
  if (!(budget > 0.0)) {
    throw ValidationError("budget must be positive");
  }

  // draw order: a seeded permutation, so no configuration repeats
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  const bool unit_costs = factory.cost_mode() == CostMode::unit;
  const double unit_full_cost = static_cast<double>(factory.full_budget());

  TuneResult result;
  struct Run {
    std::size_t position;
    double final_value;
  };
  std::vector<Run> runs;
  for (std::size_t pos : order) {
    if (runs.empty()) {
      // at least one run always completes so the comparison is never empty
    } else if (unit_costs) {
      // exact affordability: do not start a run that cannot fit
      if (result.ledger.total_cost_units + unit_full_cost > budget) {
        break;
      }
    } else if (result.ledger.total_cost_units >= budget) {
      break;
    }
    TrainableSession session = factory.make(candidates[pos]);
    session.advance(factory.full_budget());
    const std::size_t index = candidates[pos].index;
    result.ledger.charge(index, session.trace().total_cost());
    result.traces.emplace(index, session.trace());
    runs.push_back({pos, session.final_metric()});
  }
  if (result.ledger.total_cost_units > budget) {
    result.budget_overrun = true;
  }

  const auto best =
      std::min_element(runs.begin(), runs.end(), [&](const Run &a, const Run &b) {
        if (a.final_value != b.final_value) {
          return a.final_value > b.final_value;
        }
        return candidates[a.position].index < candidates[b.position].index;
      });
  result.best_configuration = candidates[best->position];
  result.best_final_metric = best->final_value;

  for (const auto &run : runs) {
    CandidateOutcome outcome;
    outcome.index = candidates[run.position].index;
    outcome.final = run.final_value;
    outcome.fully_trained = true;
    result.outcomes.push_back(outcome);
    result.fully_trained.push_back(outcome.index);
  }
  std::sort(result.outcomes.begin(), result.outcomes.end(),
            [](const CandidateOutcome &a, const CandidateOutcome &b) {
              return a.index < b.index;
            });
  std::sort(result.fully_trained.begin(), result.fully_trained.end());
  return result;
}

std::vector<PoolEntry> evaluate_pool(const std::vector<Configuration> &candidates,
                                     const SessionFactory &factory, int threads) {
  std::vector<PoolEntry> entries(candidates.size());
  detail::parallel_for(candidates.size(), threads, [&](std::size_t i) {
    TrainableSession session = factory.make(candidates[i]);
    session.advance(factory.full_budget());
    entries[i] = {0, candidates[i].index, session.final_metric()};
  });
  std::sort(entries.begin(), entries.end(), [](const PoolEntry &a, const PoolEntry &b) {
    if (a.final_metric != b.final_metric) {
      return a.final_metric < b.final_metric;
    }
    return a.index < b.index;
  });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = i + 1;
  }
  return entries;
}

} // namespace pho
