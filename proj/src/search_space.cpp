#include "pho/search_space.hpp"

#include "pho/errors.hpp"
#include "pho/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace pho {

namespace {

std::string render_real(double v) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, end);
}

// Line (1-based) of the n-th occurrence of `needle`, for addressing semantic
// errors in hand-written JSON files.
std::size_t line_of_nth_occurrence(const std::string &text,
                                   const std::string &needle, std::size_t n) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    pos = text.find(needle, pos);
    if (pos == std::string::npos) {
      return 0;
    }
    if (i < n) {
      ++pos;
    }
  }
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

} // namespace

std::string AxisValue::to_string() const {
  if (is_integer()) {
    return std::to_string(as_integer());
  }
  return render_real(value);
}

SearchSpace::SearchSpace(std::vector<HyperparamAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) {
    throw ValidationError("search space needs at least one axis");
  }
  grid_size_ = 1;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto &axis = axes_[i];
    if (axis.name.empty()) {
      throw ValidationError("axis " + std::to_string(i) + " has an empty name");
    }
    if (axis.values.empty()) {
      throw ValidationError("axis '" + axis.name + "' has no values");
    }
    for (std::size_t a = 0; a < axis.values.size(); ++a) {
      for (std::size_t b = a + 1; b < axis.values.size(); ++b) {
        if (axis.values[a] == axis.values[b]) {
          throw ValidationError("axis '" + axis.name + "' lists value " +
                                axis.values[a].to_string() + " twice");
        }
      }
    }
    for (std::size_t j = i + 1; j < axes_.size(); ++j) {
      if (axes_[j].name == axis.name) {
        throw ValidationError("duplicate axis name '" + axis.name + "'");
      }
    }
    grid_size_ *= axis.values.size();
  }
}

SearchSpace SearchSpace::from_json_text(const std::string &text,
                                        const std::string &origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &err) {
    throw DataError(origin + ": invalid JSON: " + err.what());
  }
  if (!doc.is_array()) {
    throw DataError(origin + ":1: expected a top-level array of axes");
  }

  auto fail_at = [&](const std::string &name_occurrence_key, std::size_t occurrence,
                     const std::string &message) -> DataError {
    const std::size_t line = line_of_nth_occurrence(text, name_occurrence_key, occurrence);
    return DataError(origin + ":" + std::to_string(line) + ": " + message);
  };

  std::vector<HyperparamAxis> axes;
  std::vector<std::string> seen_names;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto &entry = doc[i];
    if (!entry.is_object() || !entry.contains("name") || !entry.contains("values")) {
      throw fail_at("{", i, "axis " + std::to_string(i) +
                                " must be an object with \"name\" and \"values\"");
    }
    if (!entry["name"].is_string()) {
      throw fail_at("\"name\"", i, "axis " + std::to_string(i) + ": \"name\" must be a string");
    }
    HyperparamAxis axis;
    axis.name = entry["name"].get<std::string>();
    if (std::find(seen_names.begin(), seen_names.end(), axis.name) != seen_names.end()) {
      throw fail_at("\"" + axis.name + "\"", 1, "duplicate axis name '" + axis.name + "'");
    }
    seen_names.push_back(axis.name);
    const auto &values = entry["values"];
    if (!values.is_array()) {
      throw fail_at("\"values\"", i, "axis '" + axis.name + "': \"values\" must be an array");
    }
    if (values.empty()) {
      throw fail_at("\"values\"", i, "axis '" + axis.name + "' has an empty values array");
    }
    for (const auto &v : values) {
      if (v.is_number_integer()) {
        axis.values.push_back(AxisValue::integer(v.get<std::int64_t>()));
      } else if (v.is_number()) {
        axis.values.push_back(AxisValue::real(v.get<double>()));
      } else {
        throw fail_at("\"values\"", i, "axis '" + axis.name + "' has a non-numeric value");
      }
    }
    for (std::size_t a = 0; a < axis.values.size(); ++a) {
      for (std::size_t b = a + 1; b < axis.values.size(); ++b) {
        if (axis.values[a] == axis.values[b]) {
          throw fail_at("\"values\"", i, "axis '" + axis.name + "' lists value " +
                                            axis.values[a].to_string() + " twice");
        }
      }
    }
    axes.push_back(std::move(axis));
  }
  try {
    return SearchSpace(std::move(axes));
  } catch (const ValidationError &err) {
    throw DataError(origin + ": " + err.what());
  }
}

SearchSpace SearchSpace::from_json_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open space file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str(), path);
}

std::string SearchSpace::to_json_text() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto &axis : axes_) {
    nlohmann::ordered_json entry;
    entry["name"] = axis.name;
    auto values = nlohmann::ordered_json::array();
    for (const auto &v : axis.values) {
      if (v.is_integer()) {
        values.push_back(v.as_integer());
      } else {
        values.push_back(v.as_real());
      }
    }
    entry["values"] = std::move(values);
    doc.push_back(std::move(entry));
  }
  return doc.dump(2);
}

const AxisValue *Configuration::find(const std::string &axis) const {
  for (const auto &[name, value] : assignments) {
    if (name == axis) {
      return &value;
    }
  }
  return nullptr;
}

double Configuration::value_of(const std::string &axis) const {
  const AxisValue *value = find(axis);
  if (value == nullptr) {
    throw ValidationError("configuration has no axis '" + axis + "'");
  }
  return value->as_real();
}

double Configuration::value_or(const std::string &axis, double fallback) const {
  const AxisValue *value = find(axis);
  return value != nullptr ? value->as_real() : fallback;
}

std::string Configuration::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    out += assignments[i].first + "=" + assignments[i].second.to_string();
  }
  out += "}";
  return out;
}

Configuration config_at(const SearchSpace &space, std::size_t index) {
  if (index >= space.grid_size()) {
    throw ValidationError("configuration index " + std::to_string(index) +
                          " out of range for grid of size " +
                          std::to_string(space.grid_size()));
  }
  const auto &axes = space.axes();
  Configuration config;
  config.index = index;
  config.assignments.resize(axes.size());
  std::size_t remainder = index;
  for (std::size_t i = axes.size(); i-- > 0;) {
    const auto &axis = axes[i];
    const std::size_t pos = remainder % axis.values.size();
    remainder /= axis.values.size();
    config.assignments[i] = {axis.name, axis.values[pos]};
  }
  return config;
}

std::vector<Configuration> enumerate_grid(const SearchSpace &space) {
  std::vector<Configuration> grid;
  grid.reserve(space.grid_size());
  for (std::size_t i = 0; i < space.grid_size(); ++i) {
    grid.push_back(config_at(space, i));
  }
  return grid;
}

std::vector<Configuration> sample_without_replacement(const SearchSpace &space,
                                                      std::size_t count,
                                                      std::uint64_t seed) {
  if (count > space.grid_size()) {
    throw ValidationError("cannot sample " + std::to_string(count) +
                          " configurations from a grid of size " +
                          std::to_string(space.grid_size()));
  }
  std::vector<std::size_t> indices(space.grid_size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  Rng rng(seed);
  // partial Fisher-Yates: the first `count` slots end up a uniform sample
  std::vector<Configuration> sample;
  sample.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(indices.size() - i));
    std::swap(indices[i], indices[j]);
    sample.push_back(config_at(space, indices[i]));
  }
  return sample;
}

Configuration validate_config(const SearchSpace &space,
                              const std::map<std::string, AxisValue> &assignments) {
  const auto &axes = space.axes();
  for (const auto &[name, value] : assignments) {
    const bool known = std::any_of(axes.begin(), axes.end(),
                                   [&](const auto &axis) { return axis.name == name; });
    if (!known) {
      throw ValidationError("unknown axis '" + name + "'");
    }
  }
  Configuration config;
  config.assignments.reserve(axes.size());
  std::size_t index = 0;
  for (const auto &axis : axes) {
    const auto it = assignments.find(axis.name);
    if (it == assignments.end()) {
      throw ValidationError("missing axis '" + axis.name + "'");
    }
    const auto pos_it = std::find(axis.values.begin(), axis.values.end(), it->second);
    if (pos_it == axis.values.end()) {
      throw ValidationError("value " + it->second.to_string() +
                            " is not listed on axis '" + axis.name + "'");
    }
    const std::size_t pos = static_cast<std::size_t>(pos_it - axis.values.begin());
    index = index * axis.values.size() + pos;
    config.assignments.emplace_back(axis.name, *pos_it);
  }
  config.index = index;
  return config;
}

SearchSpace default_boosted_space() {
  return SearchSpace({
      {"learning_rate", {AxisValue::real(0.05), AxisValue::real(0.1), AxisValue::real(0.3)}},
      {"max_depth", {AxisValue::integer(1), AxisValue::integer(2), AxisValue::integer(3)}},
      {"subsample", {AxisValue::real(0.6), AxisValue::real(0.8), AxisValue::real(1.0)}},
      {"min_leaf_weight",
       {AxisValue::real(0.0), AxisValue::real(1.0), AxisValue::real(2.0),
        AxisValue::real(4.0), AxisValue::real(8.0)}},
      {"rounds_cap_fraction",
       {AxisValue::real(0.25), AxisValue::real(0.5), AxisValue::real(0.75),
        AxisValue::real(1.0)}},
  });
}

} // namespace pho
