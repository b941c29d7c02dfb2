#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pho {

/// One candidate value of a hyperparameter axis, tagged integer or real so
/// that integer-valued settings (e.g. batch sizes) survive JSON round-trips.
struct AxisValue {
  enum class Kind { integer, real };

  Kind kind = Kind::real;
  double value = 0.0;

  static AxisValue integer(std::int64_t v) {
    return {Kind::integer, static_cast<double>(v)};
  }
  static AxisValue real(double v) { return {Kind::real, v}; }

  bool is_integer() const { return kind == Kind::integer; }
  double as_real() const { return value; }
  std::int64_t as_integer() const { return static_cast<std::int64_t>(value); }

  bool operator==(const AxisValue &other) const {
    return kind == other.kind && value == other.value;
  }

  std::string to_string() const;
};

/// A named, ordered list of candidate values for one hyperparameter.
struct HyperparamAxis {
  std::string name;
  std::vector<AxisValue> values;
};

/// A finite grid of hyperparameter combinations: the Cartesian product of
/// its axes. Immutable after construction; construction validates that every
/// axis is non-empty, values are pairwise distinct and names are unique.
class SearchSpace {
public:
  explicit SearchSpace(std::vector<HyperparamAxis> axes);

  const std::vector<HyperparamAxis> &axes() const { return axes_; }
  std::size_t grid_size() const { return grid_size_; }

  /// Loads a space from a JSON document: a top-level array of
  /// {"name": string, "values": [numbers]}. Structural problems (duplicate
  /// names, empty or repeated values) are reported with the line they occur
  /// on. `origin` labels the source in error messages.
  static SearchSpace from_json_text(const std::string &text,
                                    const std::string &origin = "<string>");
  static SearchSpace from_json_file(const std::string &path);

  std::string to_json_text() const;

private:
  std::vector<HyperparamAxis> axes_;
  std::size_t grid_size_ = 0;
};

/// One point of the grid: a value for every axis, plus its canonical rank.
/// Assignments are stored in axis order; `index` is the row-major
/// lexicographic rank over the axes (first axis varies slowest).
struct Configuration {
  std::vector<std::pair<std::string, AxisValue>> assignments;
  std::size_t index = 0;

  /// Pointer to the value assigned to `axis`, or nullptr if absent.
  const AxisValue *find(const std::string &axis) const;
  /// Value of `axis` as a real; throws ValidationError if absent.
  double value_of(const std::string &axis) const;
  double value_or(const std::string &axis, double fallback) const;

  std::string to_string() const;
};

/// The configuration with the given row-major rank.
Configuration config_at(const SearchSpace &space, std::size_t index);

/// All grid points in row-major lexicographic order; the index field of the
/// i-th result equals i.
std::vector<Configuration> enumerate_grid(const SearchSpace &space);

/// `count` distinct configurations drawn uniformly without replacement,
/// deterministic for a fixed seed. Throws ValidationError when count exceeds
/// the grid size.
std::vector<Configuration> sample_without_replacement(const SearchSpace &space,
                                                      std::size_t count,
                                                      std::uint64_t seed);

/// Canonicalizes a name->value map into a Configuration, assigning the index.
/// Throws ValidationError for missing axes, unknown axes or unlisted values.
Configuration validate_config(const SearchSpace &space,
                              const std::map<std::string, AxisValue> &assignments);

/// The default boosted-tree space shipped with the repo: 540 grid points over
/// learning_rate (3) x max_depth (3) x subsample (3) x min_leaf_weight (5) x
/// rounds_cap_fraction (4). See the README for the value table.
SearchSpace default_boosted_space();

} // namespace pho
