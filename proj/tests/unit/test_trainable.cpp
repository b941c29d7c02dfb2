#include "doctest.h"

#include "pho/errors.hpp"
#include "pho/rng.hpp"
#include "pho/trainable.hpp"

#include "replay_fixtures.hpp"

#include <memory>
#include <sstream>

using namespace pho;

namespace {

Configuration dummy_config() {
  Configuration config;
  config.assignments = {{"x", AxisValue::integer(1)}};
  config.index = 0;
  return config;
}

TrainableSession replay_session(const std::vector<double> &curve) {
  return TrainableSession(dummy_config(), static_cast<int>(curve.size()),
                          std::make_unique<ReplayLearner>(curve));
}

} // namespace

TEST_CASE("advance records one metric and one cost entry per iteration") {
  auto session = replay_session(kStrongCurve);
  session.advance(2);
  CHECK(session.iterations_done() == 2);
  CHECK(session.trace().size() == 2);
  CHECK(session.trace().cost_units_by_iteration == std::vector<double>{1.0, 1.0});
  CHECK(session.early_metric(2) == 0.5839);
  CHECK_FALSE(session.completed());
}

TEST_CASE("advance to the current progress is a no-op") {
  auto session = replay_session(kStrongCurve);
  session.advance(3);
  const auto before = session.trace().metric_by_iteration;
  session.advance(3);
  CHECK(session.trace().metric_by_iteration == before);
  CHECK(session.iterations_done() == 3);
}

TEST_CASE("advance rejects rewinds and budget overruns") {
  auto session = replay_session(kStrongCurve);
  session.advance(4);
  CHECK_THROWS_AS(session.advance(3), ValidationError);
  CHECK_THROWS_AS(session.advance(static_cast<int>(kStrongCurve.size()) + 1),
                  ValidationError);
}

TEST_CASE("early metric indexing is 1-based") {
  auto strong = replay_session(kStrongCurve);
  strong.advance(3);
  CHECK(strong.early_metric(1) == 0.5344);
  CHECK(strong.early_metric(2) == 0.5839);
  CHECK(strong.early_metric(3) == strong.trace().metric_by_iteration.back());
  CHECK_THROWS_AS(strong.early_metric(4), ValidationError);
  CHECK_THROWS_AS(strong.early_metric(0), ValidationError);

  auto weak = replay_session(kWeakCurve);
  weak.advance(3);
  CHECK(weak.early_metric(3) == 0.4935);
}

TEST_CASE("final metric requires a completed session") {
  auto strong = replay_session(kStrongCurve);
  strong.advance(5);
  CHECK_THROWS_AS(strong.final_metric(), ValidationError);
  strong.advance(static_cast<int>(kStrongCurve.size()));
  CHECK(strong.completed());
  CHECK(strong.final_metric() == 0.8567);

  auto weak = replay_session(kWeakCurve);
  weak.advance(static_cast<int>(kWeakCurve.size()));
  CHECK(weak.final_metric() == 0.6743);
}

TEST_CASE("a budget of one iteration makes early and final coincide") {
  TrainableSession session(dummy_config(), 1,
                           std::make_unique<ReplayLearner>(std::vector<double>{0.42}));
  session.advance(1);
  CHECK(session.final_metric() == session.early_metric(1));
}

TEST_CASE("split advance equals straight advance on the replay learner") {
  const int full = static_cast<int>(kStrongCurve.size());
  auto straight = replay_session(kStrongCurve);
  straight.advance(full);

  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    auto split_run = replay_session(kStrongCurve);
    const int cut = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(full)));
    split_run.advance(cut);
    split_run.advance(full);
    CHECK(split_run.trace().metric_by_iteration == straight.trace().metric_by_iteration);
    CHECK(split_run.trace().cost_units_by_iteration ==
          straight.trace().cost_units_by_iteration);
  }
}

TEST_CASE("trace length always equals iterations done") {
  auto session = replay_session(kWeakCurve);
  for (int target : {1, 2, 5, 9, 19}) {
    session.advance(target);
    CHECK(session.trace().size() == static_cast<std::size_t>(target));
    CHECK(session.trace().cost_units_by_iteration.size() ==
          static_cast<std::size_t>(target));
  }
}

TEST_CASE("metrics outside [0, 1] are rejected") {
  TrainableSession session(dummy_config(), 2,
                           std::make_unique<ReplayLearner>(std::vector<double>{0.5, 1.5}));
  session.advance(1);
  CHECK_THROWS_AS(session.advance(2), ValidationError);
}

TEST_CASE("replay learner exhausts after its sequence") {
  ReplayLearner learner({0.1, 0.2});
  CHECK(learner.advance_one() == 0.1);
  CHECK(learner.advance_one() == 0.2);
  CHECK_THROWS_AS(learner.advance_one(), ValidationError);
  CHECK_THROWS_AS(ReplayLearner({}), ValidationError);
}

TEST_CASE("trace CSV export") {
  auto session = replay_session(kStrongCurve);
  session.advance(3);
  std::ostringstream out;
  write_trace_csv(out, session.trace());
  CHECK(out.str() == "iteration,metric,cost_units\n"
                     "1,0.5344,1\n"
                     "2,0.5839,1\n"
                     "3,0.619,1\n");
}

TEST_CASE("wall-clock cost mode measures nonnegative seconds") {
  TrainableSession session(dummy_config(), 2,
                           std::make_unique<ReplayLearner>(std::vector<double>{0.1, 0.2}),
                           CostMode::wall_clock);
  session.advance(2);
  for (double cost : session.trace().cost_units_by_iteration) {
    CHECK(cost >= 0.0);
  }
}
