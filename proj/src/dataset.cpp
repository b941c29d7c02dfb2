#include "pho/dataset.hpp"

#include "pho/errors.hpp"
#include "pho/rng.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace pho {

namespace {

// RFC-4180 reader: quoted fields may contain delimiters, newlines and
// doubled quotes. Accepts both \n and \r\n row endings.
std::vector<std::vector<std::string>> read_csv_records(const std::string &text,
                                                       char delimiter,
                                                       const std::string &origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;

  auto end_field = [&]() {
    record.push_back(field);
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&]() {
    end_field();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) {
      records.push_back(record);
    }
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
        }
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') {
        field.pop_back();
      }
      end_record();
      ++line;
    } else {
      field += c;
    }
  }
  if (in_quotes) {
    throw DataError(origin + ":" + std::to_string(line) + ": unterminated quoted field");
  }
  if (!field.empty() || !record.empty()) {
    if (!field.empty() && field.back() == '\r') {
      field.pop_back();
    }
    end_record();
  }
  return records;
}

bool parse_number(const std::string &cell, double &out) {
  if (cell.empty()) {
    return false;
  }
  errno = 0;
  char *end = nullptr;
  const double value = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(value)) {
    return false;
  }
  out = value;
  return true;
}

Dataset select_rows(const Dataset &source, const std::vector<std::size_t> &rows) {
  Dataset out;
  out.column_names = source.column_names;
  out.features.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    out.features.push_back(source.features[r]);
    out.labels.push_back(source.labels[r]);
  }
  return out;
}

} // namespace

Dataset parse_csv_text(const std::string &text, const std::string &label_column,
                       const std::string &positive_label,
                       const CsvOptions &options, const std::string &origin) {
  const auto records = read_csv_records(text, options.delimiter, origin);
  if (records.empty()) {
    throw DataError(origin + ": file is empty");
  }
  const auto &header = records[0];
  if (records.size() < 2) {
    throw DataError(origin + ": no data rows after the header");
  }

  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw DataError(origin + ": label column '" + label_column + "' not found in header");
  }
  const std::size_t label_pos = static_cast<std::size_t>(label_it - header.begin());

  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw DataError(origin + ": row " + std::to_string(r + 1) + " has " +
                      std::to_string(records[r].size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
  }

  // column types inferred from the first data row
  std::vector<bool> numeric(header.size(), false);
  for (std::size_t c = 0; c < header.size(); ++c) {
    double ignored;
    numeric[c] = parse_number(records[1][c], ignored);
  }

  // first-appearance category order per categorical column
  std::vector<std::vector<std::string>> categories(header.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == label_pos || numeric[c]) {
        continue;
      }
      auto &cats = categories[c];
      if (std::find(cats.begin(), cats.end(), records[r][c]) == cats.end()) {
        cats.push_back(records[r][c]);
      }
    }
  }

  Dataset dataset;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_pos) {
      continue;
    }
    if (numeric[c]) {
      dataset.column_names.push_back(header[c]);
    } else {
      for (const auto &cat : categories[c]) {
        dataset.column_names.push_back(header[c] + "=" + cat);
      }
    }
  }

  dataset.features.reserve(records.size() - 1);
  dataset.labels.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    std::vector<double> row;
    row.reserve(dataset.column_names.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == label_pos) {
        continue;
      }
      if (numeric[c]) {
        double value;
        if (!parse_number(records[r][c], value)) {
          throw DataError(origin + ": row " + std::to_string(r + 1) + ", column '" +
                          header[c] + "': non-numeric cell '" + records[r][c] +
                          "' in a numeric column");
        }
        row.push_back(value);
      } else {
        const auto &cats = categories[c];
        const auto it = std::find(cats.begin(), cats.end(), records[r][c]);
        for (std::size_t k = 0; k < cats.size(); ++k) {
          row.push_back(k == static_cast<std::size_t>(it - cats.begin()) ? 1.0 : 0.0);
        }
      }
    }
    dataset.features.push_back(std::move(row));
    dataset.labels.push_back(records[r][label_pos] == positive_label ? 1 : 0);
  }
  return dataset;
}

Dataset load_csv(const std::string &path, const std::string &label_column,
                 const std::string &positive_label, const CsvOptions &options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open CSV file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_text(buffer.str(), label_column, positive_label, options, path);
}

SplitPair split(const Dataset &dataset, double train_fraction, std::uint64_t seed,
                bool stratified) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie strictly between 0 and 1");
  }
  if (dataset.row_count() == 0) {
    throw ValidationError("cannot split an empty dataset");
  }

  Rng rng(seed);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;

  if (!stratified) {
    std::vector<std::size_t> order(dataset.row_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    const auto train_count = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(order.size())));
    train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_count));
    test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(train_count), order.end());
  } else {
    for (int cls : {0, 1}) {
      std::vector<std::size_t> members;
      for (std::size_t r = 0; r < dataset.row_count(); ++r) {
        if (dataset.labels[r] == cls) {
          members.push_back(r);
        }
      }
      rng.shuffle(members);
      const auto count = static_cast<std::size_t>(
          std::llround(train_fraction * static_cast<double>(members.size())));
      train_rows.insert(train_rows.end(), members.begin(),
                        members.begin() + static_cast<std::ptrdiff_t>(count));
      test_rows.insert(test_rows.end(),
                       members.begin() + static_cast<std::ptrdiff_t>(count), members.end());
    }
    // interleave classes rather than leaving them blocked
    rng.shuffle(train_rows);
    rng.shuffle(test_rows);
  }

  SplitPair pair;
  pair.train = select_rows(dataset, train_rows);
  pair.test = select_rows(dataset, test_rows);
  pair.seed = seed;
  pair.train_fraction = train_fraction;
  return pair;
}

Dataset make_two_gaussian_dataset(std::size_t rows, std::size_t features,
                                  double separation, std::uint64_t seed) {
  if (rows < 2 || features == 0) {
    throw ValidationError("synthetic dataset needs at least 2 rows and 1 feature");
  }
  Rng rng(seed);
  Dataset dataset;
  for (std::size_t f = 0; f < features; ++f) {
    dataset.column_names.push_back("x" + std::to_string(f));
  }
  dataset.features.reserve(rows);
  dataset.labels.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const int label = static_cast<int>(r % 2); // balanced classes
    std::vector<double> row(features);
    for (std::size_t f = 0; f < features; ++f) {
      row[f] = rng.normal(label == 1 ? separation : 0.0, 1.0);
    }
    dataset.features.push_back(std::move(row));
    dataset.labels.push_back(label);
  }
  return dataset;
}

} // namespace pho
