#include "pho/reporting.hpp"

#include "pho/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pho {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json axis_value_to_json(const AxisValue &value) {
  if (value.is_integer()) {
    return value.as_integer();
  }
  return value.as_real();
}

ordered_json assignments_to_json(const Configuration &config) {
  ordered_json out = ordered_json::object();
  for (const auto &[name, value] : config.assignments) {
    out[name] = axis_value_to_json(value);
  }
  return out;
}

ordered_json predictor_to_json(const EarlyPredictor &predictor) {
  ordered_json out;
  out["slope"] = predictor.slope;
  out["intercept"] = predictor.intercept;
  out["pearson_r"] = predictor.pearson_r;
  out["sample_count"] = predictor.sample_count;
  out["degenerate"] = predictor.degenerate;
  out["negative_slope"] = !predictor.degenerate && predictor.slope < 0.0;
  return out;
}

ordered_json summary_to_json(const Summary &summary) {
  ordered_json out;
  out["mean"] = summary.mean;
  out["median"] = summary.median;
  out["q1"] = summary.q1;
  out["q3"] = summary.q3;
  out["sd"] = summary.sd;
  out["n"] = summary.n;
  return out;
}

ordered_json t_test_to_json(const TTestResult &result) {
  ordered_json out;
  out["t_statistic"] = result.t_statistic;
  out["degrees_of_freedom"] = result.degrees_of_freedom;
  out["p_value"] = result.p_value;
  out["significant_at_005"] = result.significant_at_005;
  return out;
}

ordered_json traces_to_json(const std::map<std::size_t, TrainingTrace> &traces) {
  ordered_json out = ordered_json::object();
  for (const auto &[index, trace] : traces) {
    ordered_json entry;
    entry["metric"] = trace.metric_by_iteration;
    entry["cost_units"] = trace.cost_units_by_iteration;
    out[std::to_string(index)] = std::move(entry);
  }
  return out;
}

ordered_json outcomes_to_json(const std::vector<CandidateOutcome> &outcomes) {
  ordered_json out = ordered_json::array();
  for (const auto &outcome : outcomes) {
    ordered_json row;
    row["index"] = outcome.index;
    row["early"] = outcome.early ? ordered_json(*outcome.early) : ordered_json(nullptr);
    row["predicted"] =
        outcome.predicted ? ordered_json(*outcome.predicted) : ordered_json(nullptr);
    row["final"] = outcome.final ? ordered_json(*outcome.final) : ordered_json(nullptr);
    row["fully_trained"] = outcome.fully_trained;
    row["pilot"] = outcome.pilot;
    out.push_back(std::move(row));
  }
  return out;
}

// ---- CSV emission from the JSON form, shared by live runs and `plots` ----

void fig1_csv_from_json(std::ostream &out, const nlohmann::json &traces) {
  out << "iteration,model_id,metric\n";
  std::vector<std::size_t> ids;
  for (const auto &[key, value] : traces.items()) {
    ids.push_back(std::stoull(key));
  }
  std::sort(ids.begin(), ids.end());
  for (std::size_t id : ids) {
    const auto &metrics = traces.at(std::to_string(id)).at("metric");
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      out << (i + 1) << ',' << id << ',' << format_double(metrics[i].get<double>())
          << '\n';
    }
  }
}

void fig2_csv_from_json(std::ostream &out, const nlohmann::json &entries) {
  out << "rank,final_metric\n";
  for (const auto &entry : entries) {
    out << entry.at("rank").get<std::size_t>() << ','
        << format_double(entry.at("final_metric").get<double>()) << '\n';
  }
}

void fig3_csv_from_json(std::ostream &out, const nlohmann::json &outcomes) {
  out << "early_metric,final_metric,predicted\n";
  auto cell = [](const nlohmann::json &value) {
    return value.is_null() ? std::string() : format_double(value.get<double>());
  };
  for (const auto &row : outcomes) {
    out << cell(row.at("early")) << ',' << cell(row.at("final")) << ','
        << cell(row.at("predicted")) << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write to '" + path.string() + "'");
  }
  return out;
}

void ensure_directory(const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw DataError("cannot create output directory '" + dir + "': " + ec.message());
  }
}

} // namespace

std::string format_double(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

nlohmann::ordered_json tune_result_to_json(const TuneResult &result,
                                           const std::string &method) {
  ordered_json out;
  out["kind"] = "tune_result";
  out["method"] = method;
  ordered_json best;
  best["index"] = result.best_configuration.index;
  best["assignments"] = assignments_to_json(result.best_configuration);
  best["final_metric"] = result.best_final_metric;
  out["best"] = std::move(best);
  ordered_json counts;
  counts["fully_trained"] = result.fully_trained.size();
  counts["partially_trained_only"] = result.partially_trained_only.size();
  out["counts"] = std::move(counts);
  out["fully_trained"] = result.fully_trained;
  out["partially_trained_only"] = result.partially_trained_only;
  out["predictor"] =
      result.predictor ? predictor_to_json(*result.predictor) : ordered_json(nullptr);
  ordered_json ledger;
  ledger["total_cost_units"] = result.ledger.total_cost_units;
  ordered_json per_config = ordered_json::object();
  for (const auto &[index, cost] : result.ledger.per_configuration) {
    per_config[std::to_string(index)] = cost;
  }
  ledger["per_configuration"] = std::move(per_config);
  out["ledger"] = std::move(ledger);
  out["budget_overrun"] = result.budget_overrun;
  out["outcomes"] = outcomes_to_json(result.outcomes);
  out["traces"] = traces_to_json(result.traces);
  return out;
}

nlohmann::ordered_json pool_to_json(const std::vector<PoolEntry> &pool) {
  ordered_json entries = ordered_json::array();
  for (const auto &entry : pool) {
    ordered_json row;
    row["rank"] = entry.rank;
    row["index"] = entry.index;
    row["final_metric"] = entry.final_metric;
    entries.push_back(std::move(row));
  }
  ordered_json out;
  out["kind"] = "pool";
  out["entries"] = std::move(entries);
  return out;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig &config) {
  ordered_json out;
  out["learner"] = to_string(config.learner);
  out["space_file"] = config.space_file;
  if (config.dataset) {
    ordered_json d;
    d["path"] = config.dataset->path;
    d["label_column"] = config.dataset->label_column;
    d["positive_label"] = config.dataset->positive_label;
    d["delimiter"] = std::string(1, config.dataset->delimiter);
    out["dataset"] = std::move(d);
  } else {
    out["dataset"] = nullptr;
    ordered_json s;
    s["rows"] = config.synthetic.rows;
    s["features"] = config.synthetic.features;
    s["separation"] = config.synthetic.separation;
    s["seed"] = config.synthetic.seed;
    out["synthetic"] = std::move(s);
  }
  out["metric"] = to_string(config.metric);
  ordered_json pho_params;
  pho_params["n"] = config.pho.n;
  pho_params["m"] = config.pho.m;
  pho_params["k"] = config.pho.k;
  pho_params["threads"] = config.pho.threads;
  out["pho"] = std::move(pho_params);
  out["full_budget"] = config.full_budget;
  out["trials"] = config.trials;
  out["base_seed"] = config.base_seed;
  out["train_fraction"] = config.train_fraction;
  out["validation_fraction"] = config.validation_fraction;
  out["stratified"] = config.stratified;
  out["cost_mode"] = config.cost_mode == CostMode::unit ? "unit" : "wall_clock";
  out["pooled_t_test"] = config.pooled_t_test;
  out["output_dir"] = config.output_dir;
  return out;
}

nlohmann::ordered_json report_to_json(const ComparisonReport &report,
                                      const ExperimentConfig &config) {
  ordered_json out;
  out["kind"] = "comparison_report";
  out["config"] = config_to_json(config);

  ordered_json rows = ordered_json::array();
  for (const auto &row : report.rows) {
    ordered_json r;
    r["trial"] = row.trial;
    r["split_seed"] = row.split_seed;
    r["pho_best"] = row.pho_best;
    r["rs_best"] = row.rs_best;
    r["pho_budget"] = row.pho_budget;
    r["rs_models_evaluated"] = row.rs_models_evaluated;
    r["rs_budget_overrun"] = row.rs_budget_overrun;
    r["predictor"] = predictor_to_json(row.predictor);
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);

  ordered_json failures = ordered_json::array();
  for (const auto &failure : report.failures) {
    ordered_json f;
    f["trial"] = failure.trial;
    f["message"] = failure.message;
    failures.push_back(std::move(f));
  }
  out["failed_trials"] = report.failures.size();
  out["failures"] = std::move(failures);

  out["pho_summary"] = summary_to_json(report.pho_summary);
  out["rs_summary"] = summary_to_json(report.rs_summary);
  out["mean_difference"] = report.mean_difference;
  ordered_json tests = ordered_json::object();
  tests["welch"] = report.welch ? t_test_to_json(*report.welch) : ordered_json(nullptr);
  tests["paired"] = report.paired ? t_test_to_json(*report.paired) : ordered_json(nullptr);
  if (report.pooled) {
    tests["pooled"] = t_test_to_json(*report.pooled);
  }
  out["t_tests"] = std::move(tests);
  out["negative_slope_trials"] = report.negative_slope_trials;

  ordered_json figures;
  figures["fig1_traces"] = report.first_trial_pho
                               ? traces_to_json(report.first_trial_pho->traces)
                               : ordered_json::object();
  figures["fig2_pool"] = pool_to_json(report.first_trial_pool)["entries"];
  figures["fig3_outcomes"] = report.first_trial_pho
                                 ? outcomes_to_json(report.first_trial_pho->outcomes)
                                 : ordered_json::array();
  out["figures"] = std::move(figures);
  return out;
}

void write_fig1_traces_csv(std::ostream &out,
                           const std::map<std::size_t, TrainingTrace> &traces) {
  fig1_csv_from_json(out, traces_to_json(traces));
}

void write_fig2_pool_csv(std::ostream &out, const std::vector<PoolEntry> &pool) {
  fig2_csv_from_json(out, pool_to_json(pool)["entries"]);
}

void write_fig3_scatter_csv(std::ostream &out, const TuneResult &result) {
  fig3_csv_from_json(out, outcomes_to_json(result.outcomes));
}

void write_trials_csv(std::ostream &out, const ComparisonReport &report) {
  out << "trial,split_seed,pho_best,rs_best,pho_budget,rs_models_evaluated,"
         "rs_budget_overrun,predictor_slope,predictor_intercept,predictor_r,"
         "predictor_n,predictor_degenerate\n";
  for (const auto &row : report.rows) {
    out << row.trial << ',' << row.split_seed << ',' << format_double(row.pho_best)
        << ',' << format_double(row.rs_best) << ',' << format_double(row.pho_budget)
        << ',' << row.rs_models_evaluated << ',' << (row.rs_budget_overrun ? 1 : 0)
        << ',' << format_double(row.predictor.slope) << ','
        << format_double(row.predictor.intercept) << ','
        << format_double(row.predictor.pearson_r) << ',' << row.predictor.sample_count
        << ',' << (row.predictor.degenerate ? 1 : 0) << '\n';
  }
}

void emit_tune_plots(const TuneResult &result, const std::string &out_dir) {
  ensure_directory(out_dir);
  const std::filesystem::path dir(out_dir);
  {
    auto out = open_output(dir / "fig1_traces.csv");
    write_fig1_traces_csv(out, result.traces);
  }
  {
    auto out = open_output(dir / "fig3_scatter.csv");
    write_fig3_scatter_csv(out, result);
  }
}

void emit_pool_plot(const std::vector<PoolEntry> &pool, const std::string &out_dir) {
  ensure_directory(out_dir);
  auto out = open_output(std::filesystem::path(out_dir) / "fig2_pool.csv");
  write_fig2_pool_csv(out, pool);
}

void emit_report_files(const ComparisonReport &report,
                       const ExperimentConfig &config, const std::string &out_dir) {
  ensure_directory(out_dir);
  const std::filesystem::path dir(out_dir);
  const ordered_json report_json = report_to_json(report, config);
  {
    auto out = open_output(dir / "report.json");
    out << report_json.dump(2) << '\n';
  }
  {
    auto out = open_output(dir / "trials.csv");
    write_trials_csv(out, report);
  }
  {
    auto out = open_output(dir / "fig1_traces.csv");
    fig1_csv_from_json(out, report_json["figures"]["fig1_traces"]);
  }
  {
    auto out = open_output(dir / "fig2_pool.csv");
    fig2_csv_from_json(out, report_json["figures"]["fig2_pool"]);
  }
  {
    auto out = open_output(dir / "fig3_scatter.csv");
    fig3_csv_from_json(out, report_json["figures"]["fig3_outcomes"]);
  }
}

void emit_plots_from_json_file(const std::string &json_path,
                               const std::string &out_dir) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + json_path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error &err) {
    throw DataError(json_path + ": invalid JSON: " + err.what());
  }
  const std::string kind = doc.value("kind", "");
  ensure_directory(out_dir);
  const std::filesystem::path dir(out_dir);
  if (kind == "tune_result") {
    {
      auto out = open_output(dir / "fig1_traces.csv");
      fig1_csv_from_json(out, doc.at("traces"));
    }
    auto out = open_output(dir / "fig3_scatter.csv");
    fig3_csv_from_json(out, doc.at("outcomes"));
  } else if (kind == "pool") {
    auto out = open_output(dir / "fig2_pool.csv");
    fig2_csv_from_json(out, doc.at("entries"));
  } else if (kind == "comparison_report") {
    const auto &figures = doc.at("figures");
    {
      auto out = open_output(dir / "fig1_traces.csv");
      fig1_csv_from_json(out, figures.at("fig1_traces"));
    }
    {
      auto out = open_output(dir / "fig2_pool.csv");
      fig2_csv_from_json(out, figures.at("fig2_pool"));
    }
    auto out = open_output(dir / "fig3_scatter.csv");
    fig3_csv_from_json(out, figures.at("fig3_outcomes"));
  } else {
    throw DataError(json_path + ": unrecognized document kind '" + kind + "'");
  }
}

} // namespace pho
