#include "pho/baselines.hpp"
#include "pho/errors.hpp"
#include "pho/experiment.hpp"
#include "pho/reporting.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using pho::ExperimentConfig;

struct CliState {
  ExperimentConfig flags; // values bound to CLI options
  std::string config_file;
  std::string learner = "boosted_stumps";
  std::string metric = "accuracy";
  std::string cost_mode = "unit";
  std::string data_path;
  std::string label_column = "label";
  std::string positive_label = "1";
  std::string delimiter = ",";
  std::string json_out;
  std::string plots_dir;
  std::string out_path;
  double budget = 0.0;
};

void add_experiment_flags(CLI::App *cmd, CliState &state) {
  cmd->add_option("--config", state.config_file,
                  "JSON experiment config; flags override its fields");
  cmd->add_option("--space", state.flags.space_file,
                  "space JSON file, or 'default' for the built-in 540-point grid");
  cmd->add_option("--learner", state.learner, "model family to tune")
      ->check(CLI::IsMember({"boosted_stumps", "logistic_sgd", "analytic"}));
  cmd->add_option("--metric", state.metric, "validation metric")
      ->check(CLI::IsMember({"accuracy", "auc"}));
  cmd->add_option("--data", state.data_path, "CSV dataset path (default: synthetic)");
  cmd->add_option("--label", state.label_column, "label column name");
  cmd->add_option("--positive", state.positive_label, "label value mapped to 1");
  cmd->add_option("--delimiter", state.delimiter, "CSV delimiter")
      ->check(CLI::Validator(
          [](std::string &value) {
            return value.size() == 1 ? std::string() : "must be one character";
          },
          "CHAR"));
  cmd->add_option("--synthetic-rows", state.flags.synthetic.rows);
  cmd->add_option("--synthetic-features", state.flags.synthetic.features);
  cmd->add_option("--synthetic-separation", state.flags.synthetic.separation);
  cmd->add_option("--synthetic-seed", state.flags.synthetic.seed);
  cmd->add_option("--train-fraction", state.flags.train_fraction)
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  cmd->add_option("--validation-fraction", state.flags.validation_fraction)
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  cmd->add_flag("--stratified", state.flags.stratified, "stratify the split by class");
  cmd->add_option("--full-budget", state.flags.full_budget,
                  "iterations constituting full training")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cost-mode", state.cost_mode)
      ->check(CLI::IsMember({"unit", "wall_clock"}));
  cmd->add_option("--threads", state.flags.pho.threads)->check(CLI::PositiveNumber);
  cmd->add_option("--seed", state.flags.base_seed, "base seed for all randomness");
  cmd->add_option("-n,--pilots", state.flags.pho.n,
                  "models fully trained up front");
  cmd->add_option("-m,--partial-iterations", state.flags.pho.m,
                  "iterations of partial training");
  cmd->add_option("-k,--top", state.flags.pho.k,
                  "predicted top models trained fully");
  cmd->add_option("--trials", state.flags.trials)->check(CLI::PositiveNumber);
}

// start from the config file (or defaults) and lay explicitly-given flags on top
ExperimentConfig resolve_config(const CLI::App *cmd, const CliState &state) {
  ExperimentConfig config;
  if (!state.config_file.empty()) {
    config = ExperimentConfig::from_json_file(state.config_file);
  }
  const auto given = [&](const std::string &name) { return cmd->count(name) > 0; };

  if (given("--space")) {
    config.space_file = state.flags.space_file;
  }
  if (given("--learner")) {
    config.learner = pho::parse_learner_kind(state.learner);
  }
  if (given("--metric")) {
    config.metric = pho::parse_metric_kind(state.metric);
  }
  if (given("--data")) {
    pho::DatasetSource source;
    source.path = state.data_path;
    source.label_column = state.label_column;
    source.positive_label = state.positive_label;
    source.delimiter = state.delimiter[0];
    config.dataset = source;
  } else if (config.dataset) {
    if (given("--label")) {
      config.dataset->label_column = state.label_column;
    }
    if (given("--positive")) {
      config.dataset->positive_label = state.positive_label;
    }
    if (given("--delimiter")) {
      config.dataset->delimiter = state.delimiter[0];
    }
  }
  if (given("--synthetic-rows")) {
    config.synthetic.rows = state.flags.synthetic.rows;
  }
  if (given("--synthetic-features")) {
    config.synthetic.features = state.flags.synthetic.features;
  }
  if (given("--synthetic-separation")) {
    config.synthetic.separation = state.flags.synthetic.separation;
  }
  if (given("--synthetic-seed")) {
    config.synthetic.seed = state.flags.synthetic.seed;
  }
  if (given("--train-fraction")) {
    config.train_fraction = state.flags.train_fraction;
  }
  if (given("--validation-fraction")) {
    config.validation_fraction = state.flags.validation_fraction;
  }
  if (given("--stratified")) {
    config.stratified = state.flags.stratified;
  }
  if (given("--full-budget")) {
    config.full_budget = state.flags.full_budget;
  }
  if (given("--cost-mode")) {
    config.cost_mode = state.cost_mode == "unit" ? pho::CostMode::unit
                                                 : pho::CostMode::wall_clock;
  }
  if (given("--threads")) {
    config.pho.threads = state.flags.pho.threads;
  }
  if (given("--seed")) {
    config.base_seed = state.flags.base_seed;
  }
  if (given("-n")) {
    config.pho.n = state.flags.pho.n;
  }
  if (given("-m")) {
    config.pho.m = state.flags.pho.m;
  }
  if (given("-k")) {
    config.pho.k = state.flags.pho.k;
  }
  if (given("--trials")) {
    config.trials = state.flags.trials;
  }
  return config;
}

void write_json_file(const std::string &path, const nlohmann::ordered_json &doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw pho::DataError("cannot write to '" + path + "'");
  }
  out << doc.dump(2) << '\n';
}

void print_tune_summary(const pho::TuneResult &result, const std::string &method,
                        pho::MetricKind metric) {
  std::cout << method << " best: configuration " << result.best_configuration.index
            << " " << result.best_configuration.to_string() << "\n"
            << "final " << pho::to_string(metric) << ": "
            << pho::format_double(result.best_final_metric) << "\n"
            << "fully trained: " << result.fully_trained.size()
            << ", partially trained only: " << result.partially_trained_only.size()
            << "\n"
            << "budget consumed: "
            << pho::format_double(result.ledger.total_cost_units) << " cost units\n";
  if (result.predictor && !result.predictor->degenerate) {
    std::cout << "early->final regression: slope "
              << pho::format_double(result.predictor->slope) << ", intercept "
              << pho::format_double(result.predictor->intercept) << ", r "
              << pho::format_double(result.predictor->pearson_r) << " (n="
              << result.predictor->sample_count << ")\n";
    if (result.predictor->slope < 0.0) {
      std::cout << "note: fitted slope is negative; early and final metrics "
                   "are anticorrelated on the pilots\n";
    }
  } else if (result.predictor && result.predictor->degenerate) {
    std::cout << "early->final regression degenerate (zero early variance); "
                 "candidates ranked by early metric\n";
  }
  if (result.budget_overrun) {
    std::cout << "note: budget was below one full training; one run completed "
                 "anyway\n";
  }
}

int run_space_enumerate(const std::string &space_arg, const std::string &out_path) {
  ExperimentConfig config;
  config.space_file = space_arg;
  const auto space = pho::load_space(config);
  const auto grid = pho::enumerate_grid(space);

  std::ostream *out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      throw pho::DataError("cannot write to '" + out_path + "'");
    }
    out = &file;
  }
  *out << "index";
  for (const auto &axis : space.axes()) {
    *out << ',' << axis.name;
  }
  *out << '\n';
  for (const auto &config_point : grid) {
    *out << config_point.index;
    for (const auto &[name, value] : config_point.assignments) {
      *out << ',' << value.to_string();
    }
    *out << '\n';
  }
  std::cerr << grid.size() << " configurations\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"predictive hyperparameter tuning: partially train every "
               "candidate, predict final performance from the early metric, "
               "fully train only the predicted best"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pho 0.1.0");

  CliState state;

  // space enumerate
  auto *space_cmd = app.add_subcommand("space", "search-space utilities");
  space_cmd->require_subcommand(1);
  auto *enumerate_cmd =
      space_cmd->add_subcommand("enumerate", "list every grid configuration as CSV");
  std::string enumerate_file;
  enumerate_cmd->add_option("file", enumerate_file,
                            "space JSON file or 'default'")
      ->required();
  enumerate_cmd->add_option("--out", state.out_path, "write CSV here instead of stdout");

  // tune pho | tune random
  auto *tune_cmd = app.add_subcommand("tune", "run a tuner once");
  tune_cmd->require_subcommand(1);
  auto *pho_cmd = tune_cmd->add_subcommand("pho", "predictive tuning run");
  add_experiment_flags(pho_cmd, state);
  pho_cmd->add_option("--json", state.json_out, "write the result JSON here");
  pho_cmd->add_option("--plots", state.plots_dir,
                      "emit fig1/fig3 CSVs into this directory");
  auto *random_cmd =
      tune_cmd->add_subcommand("random", "equal-budget random search run");
  add_experiment_flags(random_cmd, state);
  random_cmd->add_option("--budget", state.budget, "cost-unit budget")->required();
  random_cmd->add_option("--json", state.json_out, "write the result JSON here");

  // pool evaluate
  auto *pool_cmd = app.add_subcommand("pool", "exhaustive grid evaluation");
  pool_cmd->require_subcommand(1);
  auto *pool_eval_cmd =
      pool_cmd->add_subcommand("evaluate", "fully train every configuration");
  add_experiment_flags(pool_eval_cmd, state);
  pool_eval_cmd->add_option("--out", state.out_path, "write the rank CSV here");
  pool_eval_cmd->add_option("--json", state.json_out, "write the pool JSON here");

  // compare
  auto *compare_cmd = app.add_subcommand(
      "compare", "paired trials: predictive tuning vs equal-budget random search");
  add_experiment_flags(compare_cmd, state);
  compare_cmd->add_option("--out", state.out_path,
                          "output directory (default from config)");

  // plots
  auto *plots_cmd =
      app.add_subcommand("plots", "regenerate figure CSVs from a saved JSON");
  std::string plots_from;
  plots_cmd->add_option("--from", plots_from, "tune/pool/report JSON file")->required();
  plots_cmd->add_option("--out", state.out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (enumerate_cmd->parsed()) {
      return run_space_enumerate(enumerate_file, state.out_path);
    }
    if (pho_cmd->parsed()) {
      const auto config = resolve_config(pho_cmd, state);
      const auto result = pho::run_pho_once(config);
      print_tune_summary(result, "pho", config.metric);
      if (!state.json_out.empty()) {
        write_json_file(state.json_out, pho::tune_result_to_json(result, "pho"));
      }
      if (!state.plots_dir.empty()) {
        pho::emit_tune_plots(result, state.plots_dir);
      }
      return 0;
    }
    if (random_cmd->parsed()) {
      const auto config = resolve_config(random_cmd, state);
      const auto result = pho::run_random_search_once(config, state.budget);
      print_tune_summary(result, "random search", config.metric);
      if (!state.json_out.empty()) {
        write_json_file(state.json_out,
                        pho::tune_result_to_json(result, "random_search"));
      }
      return 0;
    }
    if (pool_eval_cmd->parsed()) {
      const auto config = resolve_config(pool_eval_cmd, state);
      const auto pool = pho::run_pool_once(config);
      std::cout << "evaluated " << pool.size() << " configurations; best is "
                << pool.back().index << " at "
                << pho::format_double(pool.back().final_metric) << "\n";
      if (!state.out_path.empty()) {
        std::ofstream out(state.out_path, std::ios::binary);
        if (!out) {
          throw pho::DataError("cannot write to '" + state.out_path + "'");
        }
        pho::write_fig2_pool_csv(out, pool);
      }
      if (!state.json_out.empty()) {
        write_json_file(state.json_out, pho::pool_to_json(pool));
      }
      return 0;
    }
    if (compare_cmd->parsed()) {
      auto config = resolve_config(compare_cmd, state);
      if (!state.out_path.empty()) {
        config.output_dir = state.out_path;
      }
      const auto report = pho::run_comparison(config);
      pho::emit_report_files(report, config, config.output_dir);
      std::cout << report.rows.size() << " trials ("
                << report.failures.size() << " failed)\n"
                << "pho  mean " << pho::format_double(report.pho_summary.mean)
                << "  median " << pho::format_double(report.pho_summary.median) << "\n"
                << "rs   mean " << pho::format_double(report.rs_summary.mean)
                << "  median " << pho::format_double(report.rs_summary.median) << "\n"
                << "mean difference (pho - rs): "
                << pho::format_double(report.mean_difference) << "\n";
      if (report.welch) {
        std::cout << "welch t-test: t " << pho::format_double(report.welch->t_statistic)
                  << ", p " << pho::format_double(report.welch->p_value)
                  << (report.welch->significant_at_005 ? " (significant at 0.05)" : "")
                  << "\n";
      }
      if (report.paired) {
        std::cout << "paired t-test: t "
                  << pho::format_double(report.paired->t_statistic) << ", p "
                  << pho::format_double(report.paired->p_value)
                  << (report.paired->significant_at_005 ? " (significant at 0.05)" : "")
                  << "\n";
      }
      if (report.pooled) {
        std::cout << "pooled t-test: t "
                  << pho::format_double(report.pooled->t_statistic) << ", p "
                  << pho::format_double(report.pooled->p_value) << "\n";
      }
      std::cout << "report written to " << config.output_dir << "\n";
      return 0;
    }
    if (plots_cmd->parsed()) {
      pho::emit_plots_from_json_file(plots_from, state.out_path);
      std::cout << "figure CSVs written to " << state.out_path << "\n";
      return 0;
    }
  } catch (const pho::DataError &err) {
    std::cerr << "data error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
  return 0;
}
