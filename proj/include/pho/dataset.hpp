#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pho {

/// An encoded binary-classification dataset: a dense real feature matrix and
/// one 0/1 label per row. Immutable once loaded; safe to share across
/// concurrent training sessions.
struct Dataset {
  std::vector<std::vector<double>> features; // row-major
  std::vector<int> labels;                   // 0/1, one per row
  std::vector<std::string> column_names;     // encoded feature columns

  std::size_t row_count() const { return features.size(); }
  std::size_t column_count() const { return column_names.size(); }
};

struct CsvOptions {
  char delimiter = ','; // ';' supported for semicolon-separated exports
};

/// Loads an RFC-4180 CSV with a header row. The label column is mapped to 1
/// where the cell equals `positive_label`, else 0, and excluded from the
/// features. Column types are inferred from the first data row: numeric
/// columns pass through verbatim; all other columns are one-hot encoded with
/// one indicator per category, categories ordered by first appearance.
Dataset load_csv(const std::string &path, const std::string &label_column,
                 const std::string &positive_label, const CsvOptions &options = {});

/// Same as load_csv but parses in-memory text. `origin` labels error messages.
Dataset parse_csv_text(const std::string &text, const std::string &label_column,
                       const std::string &positive_label,
                       const CsvOptions &options = {},
                       const std::string &origin = "<string>");

/// A seeded train/test partition of a source dataset.
struct SplitPair {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
  double train_fraction = 0.0;
};

/// Shuffle-then-cut split: |train| = round(train_fraction * rows), the rest
/// is test, deterministic for a fixed seed. Train rows keep their shuffled
/// order. With `stratified`, the shuffle-and-cut is applied per class (row
/// counts may then differ from the rounding rule by at most one).
SplitPair split(const Dataset &dataset, double train_fraction,
                std::uint64_t seed, bool stratified = false);

/// Synthetic two-Gaussian binary dataset: class 0 centered at the origin,
/// class 1 at (separation, ..., separation), unit covariance, balanced
/// labels.
Dataset make_two_gaussian_dataset(std::size_t rows, std::size_t features,
                                  double separation, std::uint64_t seed);

} // namespace pho
