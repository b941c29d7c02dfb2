#include "pho/experiment.hpp"

#include "pho/errors.hpp"
#include "pho/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pho {

namespace {

bool learner_needs_data(LearnerKind kind) {
  return kind == LearnerKind::boosted_stumps || kind == LearnerKind::logistic_sgd;
}

CostMode parse_cost_mode(const std::string &name) {
  if (name == "unit") {
    return CostMode::unit;
  }
  if (name == "wall_clock") {
    return CostMode::wall_clock;
  }
  throw ValidationError("unknown cost mode '" + name + "' (expected unit|wall_clock)");
}

template <typename T>
void read_field(const nlohmann::json &doc, const char *key, T &out) {
  if (doc.contains(key)) {
    out = doc.at(key).get<T>();
  }
}

} // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial, SeedStream stream) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(trial) * 4 +
                                    static_cast<std::uint64_t>(stream));
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string &text,
                                                  const std::string &origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &err) {
    throw DataError(origin + ": invalid JSON: " + err.what());
  }
  if (!doc.is_object()) {
    throw DataError(origin + ": config must be a JSON object");
  }

  static const std::vector<std::string> known = {
      "learner",     "space_file",  "dataset",        "synthetic",
      "metric",      "pho",         "full_budget",    "trials",
      "base_seed",   "train_fraction", "validation_fraction", "stratified",
      "cost_mode",   "pooled_t_test", "output_dir"};
  for (const auto &[key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw DataError(origin + ": unknown config field '" + key + "'");
    }
  }

  ExperimentConfig config;
  try {
    if (doc.contains("learner")) {
      config.learner = parse_learner_kind(doc.at("learner").get<std::string>());
    }
    read_field(doc, "space_file", config.space_file);
    if (doc.contains("dataset") && !doc.at("dataset").is_null()) {
      const auto &d = doc.at("dataset");
      DatasetSource source;
      source.path = d.at("path").get<std::string>();
      source.label_column = d.at("label_column").get<std::string>();
      source.positive_label = d.at("positive_label").get<std::string>();
      if (d.contains("delimiter")) {
        const auto delim = d.at("delimiter").get<std::string>();
        if (delim.size() != 1) {
          throw DataError(origin + ": delimiter must be a single character");
        }
        source.delimiter = delim[0];
      }
      config.dataset = source;
    }
    if (doc.contains("synthetic")) {
      const auto &s = doc.at("synthetic");
      read_field(s, "rows", config.synthetic.rows);
      read_field(s, "features", config.synthetic.features);
      read_field(s, "separation", config.synthetic.separation);
      read_field(s, "seed", config.synthetic.seed);
    }
    if (doc.contains("metric")) {
      config.metric = parse_metric_kind(doc.at("metric").get<std::string>());
    }
    if (doc.contains("pho")) {
      const auto &p = doc.at("pho");
      read_field(p, "n", config.pho.n);
      read_field(p, "m", config.pho.m);
      read_field(p, "k", config.pho.k);
      read_field(p, "threads", config.pho.threads);
    }
    read_field(doc, "full_budget", config.full_budget);
    read_field(doc, "trials", config.trials);
    read_field(doc, "base_seed", config.base_seed);
    read_field(doc, "train_fraction", config.train_fraction);
    read_field(doc, "validation_fraction", config.validation_fraction);
    read_field(doc, "stratified", config.stratified);
    if (doc.contains("cost_mode")) {
      config.cost_mode = parse_cost_mode(doc.at("cost_mode").get<std::string>());
    }
    read_field(doc, "pooled_t_test", config.pooled_t_test);
    read_field(doc, "output_dir", config.output_dir);
  } catch (const nlohmann::json::exception &err) {
    throw DataError(origin + ": " + err.what());
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str(), path);
}

SearchSpace load_space(const ExperimentConfig &config) {
  if (config.space_file.empty() || config.space_file == "default") {
    return default_boosted_space();
  }
  return SearchSpace::from_json_file(config.space_file);
}

Dataset load_dataset(const ExperimentConfig &config) {
  if (config.dataset) {
    CsvOptions options;
    options.delimiter = config.dataset->delimiter;
    return load_csv(config.dataset->path, config.dataset->label_column,
                    config.dataset->positive_label, options);
  }
  return make_two_gaussian_dataset(config.synthetic.rows, config.synthetic.features,
                                   config.synthetic.separation, config.synthetic.seed);
}

TrialSetup prepare_trial(const ExperimentConfig &config, const Dataset &dataset,
                         std::size_t trial) {
  SessionOptions options;
  options.full_budget = config.full_budget;
  options.cost_mode = config.cost_mode;
  options.metric = config.metric;
  options.base_seed = trial_seed(config.base_seed, trial, SeedStream::sessions);

  std::uint64_t split_seed = trial_seed(config.base_seed, trial, SeedStream::split);

  if (!learner_needs_data(config.learner)) {
    return {make_factory(config.learner, nullptr, options), split_seed, 0};
  }

  constexpr std::size_t max_resamples = 100;
  for (std::size_t attempt = 0;; ++attempt) {
    SplitPair pair = split(dataset, config.train_fraction, split_seed, config.stratified);
    auto data = std::make_shared<LearnerData>(
        carve_validation(pair.train, config.validation_fraction));
    const bool single_class =
        std::all_of(data->valid_y.begin(), data->valid_y.end(),
                    [&](int y) { return y == data->valid_y.front(); });
    if (config.metric == MetricKind::auc && single_class) {
      if (attempt + 1 >= max_resamples) {
        throw DataError("validation rows stayed single-class after " +
                        std::to_string(max_resamples) + " resampled splits");
      }
      std::cerr << "warning: trial " << trial << ": single-class validation rows, "
                << "resampling split (attempt " << attempt + 1 << ")\n";
      split_seed = derive_seed(split_seed, attempt + 1);
      continue;
    }
    return {make_factory(config.learner, std::move(data), options), split_seed, attempt};
  }
}

namespace {

struct TrialOutput {
  TrialRow row;
  TuneResult pho_result;
};

TrialOutput run_trial(const ExperimentConfig &config,
                      const std::vector<Configuration> &candidates,
                      const Dataset &dataset, std::size_t trial) {
  TrialSetup setup = prepare_trial(config, dataset, trial);

  PhoParams params = config.pho;
  params.seed = trial_seed(config.base_seed, trial, SeedStream::tuner);
  TuneResult pho_result = pho_tune(candidates, setup.factory, params);

  const double budget = pho_result.ledger.total_cost_units;
  TuneResult rs_result =
      random_search(candidates, setup.factory, budget,
                    trial_seed(config.base_seed, trial, SeedStream::search));

  TrialRow row;
  row.trial = trial;
  row.split_seed = setup.split_seed;
  row.pho_best = pho_result.best_final_metric;
  row.rs_best = rs_result.best_final_metric;
  row.pho_budget = budget;
  row.rs_models_evaluated = rs_result.fully_trained.size();
  row.rs_budget_overrun = rs_result.budget_overrun;
  row.predictor = *pho_result.predictor;
  return {row, std::move(pho_result)};
}

} // namespace

ComparisonReport run_comparison(const ExperimentConfig &config) {
  if (config.trials < 1) {
    throw ValidationError("need at least one trial");
  }
  const SearchSpace space = load_space(config);
  const std::vector<Configuration> candidates = enumerate_grid(space);
  const Dataset dataset =
      learner_needs_data(config.learner) ? load_dataset(config) : Dataset{};

  ComparisonReport report;
  std::vector<double> pho_bests;
  std::vector<double> rs_bests;

  const std::size_t progress_step = std::max<std::size_t>(1, config.trials / 10);
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    try {
      TrialOutput output = run_trial(config, candidates, dataset, trial);
      pho_bests.push_back(output.row.pho_best);
      rs_bests.push_back(output.row.rs_best);
      if (!output.row.predictor.degenerate && output.row.predictor.slope < 0.0) {
        ++report.negative_slope_trials;
      }
      report.rows.push_back(output.row);
      if (!report.first_trial_pho) {
        report.first_trial_pho = std::move(output.pho_result);
        TrialSetup setup = prepare_trial(config, dataset, trial);
        report.first_trial_pool =
            evaluate_pool(candidates, setup.factory, config.pho.threads);
      }
    } catch (const Error &err) {
      std::cerr << "warning: trial " << trial << " failed: " << err.what() << "\n";
      report.failures.push_back({trial, err.what()});
    }
    if (config.trials >= 20 && (trial + 1) % progress_step == 0) {
      std::cerr << "trial " << trial + 1 << "/" << config.trials << " done\n";
    }
  }

  if (report.failures.size() * 10 > config.trials) {
    throw Error("aborting: " + std::to_string(report.failures.size()) + " of " +
                std::to_string(config.trials) + " trials failed (over 10%); first: " +
                report.failures.front().message);
  }
  if (report.rows.empty()) {
    throw Error("no trial succeeded");
  }

  report.pho_summary = summarize(pho_bests);
  report.rs_summary = summarize(rs_bests);
  report.mean_difference = report.pho_summary.mean - report.rs_summary.mean;
  if (report.rows.size() >= 2) {
    report.welch = t_test_two_tailed(pho_bests, rs_bests);
    report.paired = t_test_paired(pho_bests, rs_bests);
    if (config.pooled_t_test) {
      report.pooled = t_test_two_tailed(pho_bests, rs_bests, true);
    }
  }
  return report;
}

TuneResult run_pho_once(const ExperimentConfig &config) {
  const SearchSpace space = load_space(config);
  const std::vector<Configuration> candidates = enumerate_grid(space);
  const Dataset dataset =
      learner_needs_data(config.learner) ? load_dataset(config) : Dataset{};
  TrialSetup setup = prepare_trial(config, dataset, 0);
  PhoParams params = config.pho;
  params.seed = trial_seed(config.base_seed, 0, SeedStream::tuner);
  return pho_tune(candidates, setup.factory, params);
}

TuneResult run_random_search_once(const ExperimentConfig &config, double budget) {
  const SearchSpace space = load_space(config);
  const std::vector<Configuration> candidates = enumerate_grid(space);
  const Dataset dataset =
      learner_needs_data(config.learner) ? load_dataset(config) : Dataset{};
  TrialSetup setup = prepare_trial(config, dataset, 0);
  return random_search(candidates, setup.factory, budget,
                       trial_seed(config.base_seed, 0, SeedStream::search));
}

std::vector<PoolEntry> run_pool_once(const ExperimentConfig &config) {
  const SearchSpace space = load_space(config);
  const std::vector<Configuration> candidates = enumerate_grid(space);
  const Dataset dataset =
      learner_needs_data(config.learner) ? load_dataset(config) : Dataset{};
  TrialSetup setup = prepare_trial(config, dataset, 0);
  return evaluate_pool(candidates, setup.factory, config.pho.threads);
}

} // namespace pho
