#pragma once

#include "pho/baselines.hpp"
#include "pho/experiment.hpp"
#include "pho/tuner.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace pho {

/// Serializers. All output is deterministic: keys are emitted in a fixed
/// order and doubles use shortest round-trip formatting, so identical runs
/// produce byte-identical files.
nlohmann::ordered_json tune_result_to_json(const TuneResult &result,
                                           const std::string &method);
nlohmann::ordered_json pool_to_json(const std::vector<PoolEntry> &pool);
nlohmann::ordered_json config_to_json(const ExperimentConfig &config);
nlohmann::ordered_json report_to_json(const ComparisonReport &report,
                                      const ExperimentConfig &config);

/// Figure CSV emitters (stable column order, header always present).
void write_fig1_traces_csv(std::ostream &out,
                           const std::map<std::size_t, TrainingTrace> &traces);
void write_fig2_pool_csv(std::ostream &out, const std::vector<PoolEntry> &pool);
void write_fig3_scatter_csv(std::ostream &out, const TuneResult &result);
void write_trials_csv(std::ostream &out, const ComparisonReport &report);

/// Writes the figure CSVs derivable from `result` (learning-curve traces and
/// the early-vs-final scatter) into `out_dir`.
void emit_tune_plots(const TuneResult &result, const std::string &out_dir);
void emit_pool_plot(const std::vector<PoolEntry> &pool, const std::string &out_dir);

/// Writes report.json, trials.csv and all three figure CSVs into `out_dir`.
void emit_report_files(const ComparisonReport &report,
                       const ExperimentConfig &config,
                       const std::string &out_dir);

/// Regenerates figure CSVs from a previously saved JSON document (a tune
/// result, a pool evaluation or a comparison report; recognized by its
/// "kind" field).
void emit_plots_from_json_file(const std::string &json_path,
                               const std::string &out_dir);

/// Shortest round-trip decimal rendering of a double (used by every writer).
std::string format_double(double value);

} // namespace pho
