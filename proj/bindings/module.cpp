#include "pho/baselines.hpp"
#include "pho/dataset.hpp"
#include "pho/errors.hpp"
#include "pho/experiment.hpp"
#include "pho/metrics.hpp"
#include "pho/predictor.hpp"
#include "pho/reporting.hpp"
#include "pho/search_space.hpp"
#include "pho/stats.hpp"
#include "pho/tuner.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

namespace py = pybind11;
using namespace pho;

namespace {

AxisValue axis_value_from_py(const py::handle &value) {
  if (py::isinstance<py::bool_>(value)) {
    throw ValidationError("axis values must be numbers, not booleans");
  }
  if (py::isinstance<py::int_>(value)) {
    return AxisValue::integer(value.cast<std::int64_t>());
  }
  if (py::isinstance<py::float_>(value)) {
    return AxisValue::real(value.cast<double>());
  }
  throw ValidationError("axis values must be numbers");
}

py::object axis_value_to_py(const AxisValue &value) {
  if (value.is_integer()) {
    return py::int_(value.as_integer());
  }
  return py::float_(value.as_real());
}

SearchSpace space_from_axes(const std::vector<std::pair<std::string, py::list>> &axes) {
  std::vector<HyperparamAxis> converted;
  converted.reserve(axes.size());
  for (const auto &[name, values] : axes) {
    HyperparamAxis axis;
    axis.name = name;
    for (const auto &value : values) {
      axis.values.push_back(axis_value_from_py(value));
    }
    converted.push_back(std::move(axis));
  }
  return SearchSpace(std::move(converted));
}

py::dict config_to_dict(const Configuration &config) {
  py::dict assignments;
  for (const auto &[name, value] : config.assignments) {
    assignments[py::str(name)] = axis_value_to_py(value);
  }
  return assignments;
}

ExperimentConfig experiment_config_from_json_str(const std::string &text) {
  return ExperimentConfig::from_json_text(text, "<python>");
}

py::object json_to_py(const nlohmann::ordered_json &doc) {
  const py::module_ json = py::module_::import("json");
  return json.attr("loads")(doc.dump());
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "predictive hyperparameter tuning: pilot-train n configurations, "
            "regress final metric on the iteration-m metric, fully train only "
            "the predicted top k";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  // ---- search space
  py::class_<Configuration>(m, "Configuration")
      .def_readonly("index", &Configuration::index)
      .def_property_readonly("assignments", &config_to_dict)
      .def("value_of", &Configuration::value_of, py::arg("axis"))
      .def("__repr__", [](const Configuration &config) {
        return "Configuration(" + std::to_string(config.index) + ", " +
               config.to_string() + ")";
      });

  py::class_<SearchSpace>(m, "SearchSpace")
      .def(py::init(&space_from_axes), py::arg("axes"),
           "Build a space from [(name, [values...]), ...]")
      .def_static("from_json_file", &SearchSpace::from_json_file, py::arg("path"))
      .def_static("from_json_text", &SearchSpace::from_json_text, py::arg("text"),
                  py::arg("origin") = "<string>")
      .def_property_readonly("grid_size", &SearchSpace::grid_size)
      .def("to_json_text", &SearchSpace::to_json_text)
      .def("axis_names", [](const SearchSpace &space) {
        std::vector<std::string> names;
        for (const auto &axis : space.axes()) {
          names.push_back(axis.name);
        }
        return names;
      });

  m.def("default_boosted_space", &default_boosted_space);
  m.def("enumerate_grid", &enumerate_grid, py::arg("space"));
  m.def("config_at", &config_at, py::arg("space"), py::arg("index"));
  m.def("sample_without_replacement", &sample_without_replacement, py::arg("space"),
        py::arg("count"), py::arg("seed"));
  m.def(
      "validate_config",
      [](const SearchSpace &space, const py::dict &assignments) {
        std::map<std::string, AxisValue> converted;
        for (const auto &item : assignments) {
          converted.emplace(item.first.cast<std::string>(),
                            axis_value_from_py(item.second));
        }
        return validate_config(space, converted);
      },
      py::arg("space"), py::arg("assignments"));

  // ---- data
  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("row_count", &Dataset::row_count)
      .def_property_readonly("column_count", &Dataset::column_count)
      .def_readonly("column_names", &Dataset::column_names)
      .def_readonly("features", &Dataset::features)
      .def_readonly("labels", &Dataset::labels);

  py::class_<SplitPair>(m, "SplitPair")
      .def_readonly("train", &SplitPair::train)
      .def_readonly("test", &SplitPair::test)
      .def_readonly("seed", &SplitPair::seed)
      .def_readonly("train_fraction", &SplitPair::train_fraction);

  m.def(
      "load_csv",
      [](const std::string &path, const std::string &label_column,
         const std::string &positive_label, const std::string &delimiter) {
        if (delimiter.size() != 1) {
          throw ValidationError("delimiter must be a single character");
        }
        CsvOptions options;
        options.delimiter = delimiter[0];
        return load_csv(path, label_column, positive_label, options);
      },
      py::arg("path"), py::arg("label_column"), py::arg("positive_label"),
      py::arg("delimiter") = ",");
  m.def("split", &split, py::arg("dataset"), py::arg("train_fraction"),
        py::arg("seed"), py::arg("stratified") = false);
  m.def("make_two_gaussian_dataset", &make_two_gaussian_dataset, py::arg("rows"),
        py::arg("features"), py::arg("separation"), py::arg("seed"));

  // ---- metrics
  m.def(
      "accuracy",
      [](const std::vector<double> &scores, const std::vector<int> &labels,
         double threshold) { return accuracy({scores, labels}, threshold); },
      py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5);
  m.def(
      "auc_roc",
      [](const std::vector<double> &scores, const std::vector<int> &labels) {
        return auc_roc({scores, labels});
      },
      py::arg("scores"), py::arg("labels"));

  // ---- early predictor
  py::class_<EarlyPredictor>(m, "EarlyPredictor")
      .def_readonly("slope", &EarlyPredictor::slope)
      .def_readonly("intercept", &EarlyPredictor::intercept)
      .def_readonly("pearson_r", &EarlyPredictor::pearson_r)
      .def_readonly("sample_count", &EarlyPredictor::sample_count)
      .def_readonly("degenerate", &EarlyPredictor::degenerate)
      .def("__repr__", [](const EarlyPredictor &predictor) {
        return "EarlyPredictor(slope=" + format_double(predictor.slope) +
               ", intercept=" + format_double(predictor.intercept) +
               ", r=" + format_double(predictor.pearson_r) + ")";
      });

  m.def("fit_early_predictor", &fit_early_predictor, py::arg("pairs"),
        "OLS fit of (early, final) metric pairs");
  m.def("predict", &predict, py::arg("predictor"), py::arg("early"));
  m.def("pearson", &pearson, py::arg("pairs"));

  // ---- stats
  py::class_<Summary>(m, "Summary")
      .def_readonly("mean", &Summary::mean)
      .def_readonly("median", &Summary::median)
      .def_readonly("q1", &Summary::q1)
      .def_readonly("q3", &Summary::q3)
      .def_readonly("sd", &Summary::sd)
      .def_readonly("n", &Summary::n);

  py::class_<TTestResult>(m, "TTestResult")
      .def_readonly("t_statistic", &TTestResult::t_statistic)
      .def_readonly("degrees_of_freedom", &TTestResult::degrees_of_freedom)
      .def_readonly("p_value", &TTestResult::p_value)
      .def_readonly("significant_at_005", &TTestResult::significant_at_005);

  m.def("summarize", &summarize, py::arg("samples"));
  m.def("t_test_two_tailed", &t_test_two_tailed, py::arg("a"), py::arg("b"),
        py::arg("pooled_variance") = false);
  m.def("t_test_paired", &t_test_paired, py::arg("a"), py::arg("b"));

  // ---- tuning results
  py::class_<BudgetLedger>(m, "BudgetLedger")
      .def_readonly("total_cost_units", &BudgetLedger::total_cost_units)
      .def_readonly("per_configuration", &BudgetLedger::per_configuration);

  py::class_<TuneResult>(m, "TuneResult")
      .def_readonly("best_configuration", &TuneResult::best_configuration)
      .def_readonly("best_final_metric", &TuneResult::best_final_metric)
      .def_readonly("fully_trained", &TuneResult::fully_trained)
      .def_readonly("partially_trained_only", &TuneResult::partially_trained_only)
      .def_readonly("predictor", &TuneResult::predictor)
      .def_readonly("ledger", &TuneResult::ledger)
      .def_readonly("budget_overrun", &TuneResult::budget_overrun)
      .def(
          "to_dict",
          [](const TuneResult &result, const std::string &method) {
            return json_to_py(tune_result_to_json(result, method));
          },
          py::arg("method") = "pho");

  // ---- experiment harness
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_static("from_json", &experiment_config_from_json_str, py::arg("text"),
                  "Parse the same JSON document the CLI accepts via --config")
      .def_static("from_json_file", &ExperimentConfig::from_json_file,
                  py::arg("path"));

  m.def("run_pho_once", &run_pho_once, py::arg("config"),
        "One predictive tuning run using the trial-0 seed block");
  m.def("run_random_search_once", &run_random_search_once, py::arg("config"),
        py::arg("budget"));
  m.def(
      "run_pool_once",
      [](const ExperimentConfig &config) {
        py::list out;
        for (const auto &entry : run_pool_once(config)) {
          out.append(py::make_tuple(entry.rank, entry.index, entry.final_metric));
        }
        return out;
      },
      py::arg("config"), "Fully train every configuration; (rank, index, final)");
  m.def(
      "run_comparison",
      [](const ExperimentConfig &config) {
        const auto report = run_comparison(config);
        return json_to_py(report_to_json(report, config));
      },
      py::arg("config"),
      "Paired tuner-vs-random-search trials; returns the report as a dict");
  m.def(
      "emit_report_files",
      [](const ExperimentConfig &config, const std::string &out_dir) {
        const auto report = run_comparison(config);
        emit_report_files(report, config, out_dir);
      },
      py::arg("config"), py::arg("out_dir"));

  m.attr("__version__") = "0.1.0";
}
