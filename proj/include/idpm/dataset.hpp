//
// Copyright 2026 The idpm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Numeric microdata: ingestion, attribute domains, column statistics, class
// derivation and train/test splitting.

#ifndef IDPM_DATASET_HPP_
#define IDPM_DATASET_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idpm/csv.hpp"
#include "idpm/error.hpp"

namespace idpm {

enum class Stage { kOriginal, kMicroaggregated, kPreprocessed, kMasked };

inline std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kOriginal:
      return "original";
    case Stage::kMicroaggregated:
      return "microaggregated";
    case Stage::kPreprocessed:
      return "preprocessed";
    case Stage::kMasked:
      return "masked";
  }
  return "unknown";
}

// A string column that travels with the records but is never transformed.
struct Labels {
  std::string name;
  std::vector<std::string> values;
};

inline constexpr std::string_view kIdColumn = "id";

// Immutable n x m table of finite doubles stored column by column. Row i of
// every derived dataset corresponds to row i of its source.
class Dataset {
 public:
  Dataset(std::vector<std::string> attributes,
          std::vector<std::vector<double>> columns,
          Stage stage = Stage::kOriginal, std::vector<std::string> ids = {},
          std::optional<Labels> labels = std::nullopt)
      : attributes_(std::move(attributes)),
        columns_(std::move(columns)),
        stage_(stage),
        ids_(std::move(ids)),
        labels_(std::move(labels)) {
    require(!attributes_.empty(), ErrorCode::kSchema,
            "dataset needs at least one attribute");
    require(attributes_.size() == columns_.size(), ErrorCode::kSchema,
            "attribute names and columns differ in count");
    rows_ = columns_.front().size();
    require(rows_ >= 1, ErrorCode::kInsufficientData,
            "dataset needs at least one record");
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      require(columns_[j].size() == rows_, ErrorCode::kSchema,
              "column '" + attributes_[j] + "' has " +
                  std::to_string(columns_[j].size()) + " values, expected " +
                  std::to_string(rows_));
    }
    for (std::size_t j = 0; j < attributes_.size(); ++j) {
      for (std::size_t l = j + 1; l < attributes_.size(); ++l) {
        require(attributes_[j] != attributes_[l], ErrorCode::kSchema,
                "duplicate attribute '" + attributes_[j] + "'");
      }
    }
    require(ids_.empty() || ids_.size() == rows_, ErrorCode::kSchema,
            "id column length differs from record count");
    require(!labels_ || labels_->values.size() == rows_, ErrorCode::kSchema,
            "label column length differs from record count");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return attributes_.size(); }
  Stage stage() const noexcept { return stage_; }

  const std::vector<std::string>& attributes() const noexcept {
    return attributes_;
  }
  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  const std::vector<std::vector<double>>& columns() const noexcept {
    return columns_;
  }
  double value(std::size_t row, std::size_t col) const {
    return columns_.at(col).at(row);
  }
  std::vector<double> row(std::size_t i) const {
    std::vector<double> out;
    out.reserve(cols());
    for (const auto& column : columns_) out.push_back(column.at(i));
    return out;
  }

  std::optional<std::size_t> find_attribute(std::string_view name) const {
    const auto it = std::find(attributes_.begin(), attributes_.end(), name);
    if (it == attributes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - attributes_.begin());
  }
  std::size_t attribute_index(std::string_view name) const {
    const auto index = find_attribute(name);
    if (!index) {
      fail(ErrorCode::kSchema, "no attribute named '" + std::string(name) + "'");
    }
    return *index;
  }

  bool has_ids() const noexcept { return !ids_.empty(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::optional<Labels>& labels() const noexcept { return labels_; }

  // Same schema, ids and labels; new values and stage.
  Dataset with_columns(std::vector<std::vector<double>> columns,
                       Stage stage) const {
    return Dataset(attributes_, std::move(columns), stage, ids_, labels_);
  }

  Dataset with_labels(std::optional<Labels> labels) const {
    return Dataset(attributes_, columns_, stage_, ids_, std::move(labels));
  }

  // Rows [begin, end).
  Dataset slice_rows(std::size_t begin, std::size_t end) const {
    require(begin < end && end <= rows_, ErrorCode::kParameter,
            "invalid row range");
    std::vector<std::vector<double>> columns;
    columns.reserve(cols());
    for (const auto& column : columns_) {
      columns.emplace_back(column.begin() + static_cast<std::ptrdiff_t>(begin),
                           column.begin() + static_cast<std::ptrdiff_t>(end));
    }
    std::vector<std::string> ids;
    if (has_ids()) {
      ids.assign(ids_.begin() + static_cast<std::ptrdiff_t>(begin),
                 ids_.begin() + static_cast<std::ptrdiff_t>(end));
    }
    std::optional<Labels> labels;
    if (labels_) {
      labels = Labels{labels_->name,
                      {labels_->values.begin() +
                           static_cast<std::ptrdiff_t>(begin),
                       labels_->values.begin() +
                           static_cast<std::ptrdiff_t>(end)}};
    }
    return Dataset(attributes_, std::move(columns), stage_, std::move(ids),
                   std::move(labels));
  }

 private:
  std::vector<std::string> attributes_;
  std::vector<std::vector<double>> columns_;
  std::size_t rows_ = 0;
  Stage stage_;
  std::vector<std::string> ids_;
  std::optional<Labels> labels_;
};

// ---------------------------------------------------------------------------
// CSV ingestion and emission
// ---------------------------------------------------------------------------

struct LoadOptions {
  // Numeric attributes to keep, in this order. Empty selects every column
  // other than the id and label columns.
  std::vector<std::string> attributes = {};
  // Optional string column carried through as Labels.
  std::optional<std::string> label_column = std::nullopt;
};

// The first row is the header. A leading column named "id" is kept verbatim.
// `source` only appears in error messages.
inline Dataset read_csv(std::istream& in, const LoadOptions& options = {},
                        std::string_view source = "<stream>") {
  const std::vector<csv::Row> rows = csv::parse(in);
  const std::string where(source);
  require(!rows.empty(), ErrorCode::kSchema, where + ": missing header row");
  const csv::Row& header = rows.front();

  const bool has_ids = !header.empty() && header.front() == kIdColumn;
  auto header_index = [&](std::string_view name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };

  std::optional<std::size_t> label_index;
  if (options.label_column) {
    label_index = header_index(*options.label_column);
    require(label_index.has_value(), ErrorCode::kSchema,
            where + ": missing label column '" + *options.label_column + "'");
  }

  std::vector<std::string> names;
  std::vector<std::size_t> indices;
  if (options.attributes.empty()) {
    for (std::size_t c = has_ids ? 1 : 0; c < header.size(); ++c) {
      if (label_index && c == *label_index) continue;
      names.push_back(header[c]);
      indices.push_back(c);
    }
  } else {
    for (const std::string& name : options.attributes) {
      const auto index = header_index(name);
      require(index.has_value(), ErrorCode::kSchema,
              where + ": missing column '" + name + "'");
      names.push_back(name);
      indices.push_back(*index);
    }
  }
  require(!names.empty(), ErrorCode::kSchema,
          where + ": no numeric attributes selected");

  std::vector<std::vector<double>> columns(names.size());
  std::vector<std::string> ids;
  std::optional<Labels> labels;
  if (label_index) labels = Labels{header[*label_index], {}};

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    // Tolerate blank lines.
    if (row.size() == 1 && row.front().empty()) continue;
    require(row.size() == header.size(), ErrorCode::kParse,
            where + ": row " + std::to_string(r) + " has " +
                std::to_string(row.size()) + " fields, header has " +
                std::to_string(header.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
      double value = 0.0;
      if (!csv::parse_double(row[indices[j]], value)) {
        fail(ErrorCode::kParse, where + ": row " + std::to_string(r) +
                                    ", column '" + names[j] +
                                    "': not a finite number: '" +
                                    row[indices[j]] + "'");
      }
      columns[j].push_back(value);
    }
    if (has_ids) ids.push_back(row.front());
    if (labels) labels->values.push_back(row[*label_index]);
  }
  require(!columns.front().empty(), ErrorCode::kInsufficientData,
          where + ": no records");
  return Dataset(std::move(names), std::move(columns), Stage::kOriginal,
                 std::move(ids), std::move(labels));
}

inline Dataset load_csv(const std::string& path,
                        const LoadOptions& options = {}) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path + "'");
  return read_csv(in, options, path);
}

// Writes id (if present), the attributes, then the label column (if any).
inline void write_csv(std::ostream& out, const Dataset& d) {
  std::vector<std::string> fields;
  if (d.has_ids()) fields.emplace_back(kIdColumn);
  fields.insert(fields.end(), d.attributes().begin(), d.attributes().end());
  if (d.labels()) fields.push_back(d.labels()->name);
  csv::write_row(out, fields);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    fields.clear();
    if (d.has_ids()) fields.push_back(d.ids()[i]);
    for (std::size_t j = 0; j < d.cols(); ++j) {
      fields.push_back(csv::format_double(d.value(i, j)));
    }
    if (d.labels()) fields.push_back(d.labels()->values[i]);
    csv::write_row(out, fields);
  }
}

inline void save_csv(const std::string& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo,
          "cannot write '" + path + "'");
  write_csv(out, d);
  require(static_cast<bool>(out), ErrorCode::kIo,
          "write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Attribute domains
// ---------------------------------------------------------------------------

struct AttributeDomain {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  // Scale factor when built from the observed maximum; absent for explicit
  // bounds.
  std::optional<double> alpha;

  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

// [0, alpha * max] per attribute. Attributes are non-negative magnitudes, so
// negative values are rejected; an all-zero column yields [0, 0].
inline std::vector<AttributeDomain> compute_domains(const Dataset& d,
                                                    double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0, ErrorCode::kParameter,
          "alpha must be positive");
  require(d.stage() == Stage::kOriginal, ErrorCode::kParameter,
          "domains are computed from the original dataset");
  std::vector<AttributeDomain> domains;
  domains.reserve(d.cols());
  for (std::size_t j = 0; j < d.cols(); ++j) {
    const auto column = d.column(j);
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    require(*lo >= 0.0, ErrorCode::kDegenerate,
            "attribute '" + d.attributes()[j] +
                "' has negative values; alpha-scaled domains need "
                "non-negative data (supply explicit domains instead)");
    domains.push_back({d.attributes()[j], 0.0, alpha * *hi, alpha});
  }
  return domains;
}

// User-supplied [lower, upper] per attribute, in attribute order.
inline std::vector<AttributeDomain> explicit_domains(
    const Dataset& d, std::span<const std::pair<double, double>> bounds) {
  require(bounds.size() == d.cols(), ErrorCode::kParameter,
          "expected " + std::to_string(d.cols()) + " domains, got " +
              std::to_string(bounds.size()));
  std::vector<AttributeDomain> domains;
  domains.reserve(d.cols());
  for (std::size_t j = 0; j < d.cols(); ++j) {
    const auto [lower, upper] = bounds[j];
    require(std::isfinite(lower) && std::isfinite(upper) && lower <= upper,
            ErrorCode::kParameter,
            "invalid domain for '" + d.attributes()[j] + "'");
    domains.push_back({d.attributes()[j], lower, upper, std::nullopt});
  }
  return domains;
}

inline void check_within_domains(const Dataset& d,
                                 std::span<const AttributeDomain> domains) {
  require(domains.size() == d.cols(), ErrorCode::kParameter,
          "expected one domain per attribute");
  for (std::size_t j = 0; j < d.cols(); ++j) {
    for (std::size_t i = 0; i < d.rows(); ++i) {
      const double x = d.value(i, j);
      if (!domains[j].contains(x)) {
        fail(ErrorCode::kDomain,
             "attribute '" + d.attributes()[j] + "', row " +
                 std::to_string(i + 1) + ": value " + csv::format_double(x) +
                 " outside [" + csv::format_double(domains[j].lower) + ", " +
                 csv::format_double(domains[j].upper) + "]");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Column statistics
// ---------------------------------------------------------------------------

struct ColumnStats {
  std::vector<std::string> attributes;
  std::vector<double> variance;  // sample variance, denominator n - 1
  std::vector<double> min;
  std::vector<double> max;
  std::vector<double> mean;

  std::size_t size() const noexcept { return attributes.size(); }
};

inline ColumnStats column_stats(const Dataset& d) {
  require(d.rows() >= 2, ErrorCode::kInsufficientData,
          "column statistics need at least two records");
  ColumnStats stats;
  stats.attributes = d.attributes();
  const double n = static_cast<double>(d.rows());
  for (std::size_t j = 0; j < d.cols(); ++j) {
    const auto column = d.column(j);
    double sum = 0.0;
    for (double x : column) sum += x;
    const double mean = sum / n;
    double squares = 0.0;
    for (double x : column) squares += (x - mean) * (x - mean);
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    stats.variance.push_back(squares / (n - 1.0));
    stats.min.push_back(*lo);
    stats.max.push_back(*hi);
    stats.mean.push_back(mean);
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Class derivation and train/test split
// ---------------------------------------------------------------------------

inline constexpr std::string_view kLowLabel = "low";
inline constexpr std::string_view kHighLabel = "high";

// Labels each record "low" (value <= threshold) or "high" and removes the
// source attribute from the numeric matrix.
inline Dataset derive_class(const Dataset& d, std::string_view attribute,
                            double threshold,
                            std::string label_name = "class") {
  const std::size_t source = d.attribute_index(attribute);
  require(d.cols() >= 2, ErrorCode::kSchema,
          "deriving a class from the only attribute leaves no features");
  Labels labels{std::move(label_name), {}};
  labels.values.reserve(d.rows());
  for (double x : d.column(source)) {
    labels.values.emplace_back(x <= threshold ? kLowLabel : kHighLabel);
  }
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (j == source) continue;
    names.push_back(d.attributes()[j]);
    columns.push_back(d.columns()[j]);
  }
  return Dataset(std::move(names), std::move(columns), d.stage(), d.ids(),
                 std::move(labels));
}

struct TrainTestSplit {
  Dataset train;  // leading rows of the masked dataset
  Dataset test;   // remaining rows of the original dataset
};

// Number of leading rows that go to training: floor(fraction * n).
inline std::size_t train_row_count(std::size_t n, double fraction) {
  // The nudge keeps products such as 0.29 * 100 from rounding down to 28.
  return static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n) + 1e-9));
}

// When the masked dataset carries no labels it inherits the original's.
inline TrainTestSplit split_train_test(const Dataset& original,
                                       const Dataset& masked, double fraction) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::kParameter,
          "fraction must lie strictly between 0 and 1");
  require(original.rows() == masked.rows(), ErrorCode::kAlignment,
          "original has " + std::to_string(original.rows()) +
              " rows, masked has " + std::to_string(masked.rows()));
  require(original.attributes() == masked.attributes(), ErrorCode::kAlignment,
          "original and masked attributes differ");
  const std::size_t cut = train_row_count(original.rows(), fraction);
  require(cut >= 1 && cut < original.rows(), ErrorCode::kParameter,
          "split leaves an empty training or test set");
  const Dataset& train_source =
      masked.labels() || !original.labels() ? masked
                                            : masked.with_labels(original.labels());
  return {train_source.slice_rows(0, cut),
          original.slice_rows(cut, original.rows())};
}

}  // namespace idpm

#endif  // IDPM_DATASET_HPP_
