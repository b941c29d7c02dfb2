#pragma once

#include "pho/tuner.hpp"

#include <cstdint>
#include <vector>

namespace pho {

/// Equal-budget random search: draws candidates uniformly without
/// replacement (seeded) and trains each fully until the next run would not
/// fit in `budget` cost units. In unit-cost mode affordability is exact
/// (full_budget units per run); in wall-clock mode a run starts whenever the
/// ledger is still below budget. At least one run always completes: if even
/// that one exceeds the budget the result is flagged budget_overrun.
TuneResult random_search(const std::vector<Configuration> &candidates,
                         const SessionFactory &factory, double budget,
                         std::uint64_t seed);

struct PoolEntry {
  std::size_t rank = 0; // 1-based, ascending final metric
  std::size_t index = 0;
  double final_metric = 0.0;
};

/// Fully trains every candidate and returns (rank, index, final metric)
/// sorted by final metric ascending: the cumulative-histogram data shape.
/// Ties keep configuration-index order. Training may run on `threads`
/// workers; the output is merge-ordered and scheduling-independent.
std::vector<PoolEntry> evaluate_pool(const std::vector<Configuration> &candidates,
                                     const SessionFactory &factory,
                                     int threads = 1);

} // namespace pho
