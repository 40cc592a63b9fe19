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

// Individual-ranking (univariate) microaggregation and the pre-processing
// step that replaces each cluster's extremes by its second extremes.

#ifndef IDPM_MICROAGGREGATION_HPP_
#define IDPM_MICROAGGREGATION_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "idpm/csv.hpp"
#include "idpm/dataset.hpp"
#include "idpm/error.hpp"

namespace idpm {

namespace internal {

inline constexpr std::size_t kPairwiseThreshold = 10000;

inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 128) {
    double sum = 0.0;
    for (double x : values) sum += x;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace internal

// Plain left-to-right summation up to 10^4 values, pairwise beyond that.
inline double accurate_sum(std::span<const double> values) {
  if (values.size() <= internal::kPairwiseThreshold) {
    double sum = 0.0;
    for (double x : values) sum += x;
    return sum;
  }
  return internal::pairwise_sum(values);
}

// Arithmetic mean, pinned into [min, max] against rounding.
inline double centroid_of(std::span<const double> values) {
  require(!values.empty(), ErrorCode::kParameter, "empty cluster");
  const double mean =
      accurate_sum(values) / static_cast<double>(values.size());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return std::clamp(mean, *lo, *hi);
}

struct Cluster {
  // Record indices in ascending (value, index) order.
  std::vector<std::size_t> members;
  double centroid = 0.0;

  std::size_t size() const noexcept { return members.size(); }
};

struct Clustering {
  std::string attribute;
  std::size_t k = 1;
  std::vector<Cluster> clusters;
  // assignment[i] is the cluster holding record i.
  std::vector<std::size_t> assignment;

  // Attribute values of cluster j, in the cluster's member order.
  std::vector<double> values_of(std::size_t j,
                                std::span<const double> column) const {
    std::vector<double> out;
    out.reserve(clusters.at(j).size());
    for (std::size_t i : clusters[j].members) out.push_back(column[i]);
    return out;
  }
};

// Sorts the column by (value, index), cuts it into floor(n / k) runs of k
// consecutive positions and folds the n mod k leftovers into the last run,
// so every cluster holds between k and 2k - 1 records.
inline Clustering individual_ranking_cluster(std::span<const double> values,
                                             std::size_t k,
                                             std::string attribute = {}) {
  const std::size_t n = values.size();
  require(k >= 1, ErrorCode::kParameter, "k must be at least 1");
  require(k <= n, ErrorCode::kParameter,
          "k = " + std::to_string(k) + " exceeds the number of records (" +
              std::to_string(n) + ")");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return values[a] < values[b];
                   });

  Clustering clustering;
  clustering.attribute = std::move(attribute);
  clustering.k = k;
  clustering.assignment.resize(n);
  const std::size_t groups = n / k;
  clustering.clusters.reserve(groups);
  std::vector<double> buffer;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t begin = g * k;
    const std::size_t end = (g + 1 == groups) ? n : begin + k;
    Cluster cluster;
    cluster.members.assign(order.begin() + static_cast<std::ptrdiff_t>(begin),
                           order.begin() + static_cast<std::ptrdiff_t>(end));
    buffer.clear();
    for (std::size_t i : cluster.members) {
      buffer.push_back(values[i]);
      clustering.assignment[i] = g;
    }
    cluster.centroid = centroid_of(buffer);
    clustering.clusters.push_back(std::move(cluster));
  }
  return clustering;
}

struct MicroaggregationResult {
  Dataset data;
  std::vector<Clustering> clusterings;  // one per attribute
};

// Replaces every value by the centroid of its cluster, attribute by
// attribute.
inline MicroaggregationResult microaggregate(const Dataset& d, std::size_t k) {
  require(d.stage() == Stage::kOriginal || d.stage() == Stage::kPreprocessed,
          ErrorCode::kParameter,
          "cannot microaggregate a " + std::string(stage_name(d.stage())) +
              " dataset");
  std::vector<Clustering> clusterings;
  std::vector<std::vector<double>> columns;
  clusterings.reserve(d.cols());
  columns.reserve(d.cols());
  for (std::size_t j = 0; j < d.cols(); ++j) {
    Clustering clustering =
        individual_ranking_cluster(d.column(j), k, d.attributes()[j]);
    std::vector<double> column(d.rows());
    for (const Cluster& cluster : clustering.clusters) {
      for (std::size_t i : cluster.members) column[i] = cluster.centroid;
    }
    columns.push_back(std::move(column));
    clusterings.push_back(std::move(clustering));
  }
  return {d.with_columns(std::move(columns), Stage::kMicroaggregated),
          std::move(clusterings)};
}

// ---------------------------------------------------------------------------
// Order statistics and pre-processing
// ---------------------------------------------------------------------------

// Three smallest and three largest values, counting repeats.
struct ClusterExtremes {
  double min = 0.0;         // smallest
  double min_second = 0.0;  // second smallest
  double min_third = 0.0;   // third smallest
  double max = 0.0;         // largest
  double max_second = 0.0;  // second largest
  double max_third = 0.0;   // third largest
};

inline ClusterExtremes cluster_extremes(std::span<const double> values) {
  require(values.size() >= 3, ErrorCode::kParameter,
          "order statistics need a cluster of at least three values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  return {sorted[0],     sorted[1],     sorted[2],
          sorted[n - 1], sorted[n - 2], sorted[n - 3]};
}

// Position of the smallest / largest value; ties go to the lowest position.
inline std::size_t position_of_min(std::span<const double> values) {
  return static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
}
inline std::size_t position_of_max(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t p = 1; p < values.size(); ++p) {
    if (values[p] > values[best]) best = p;
  }
  return best;
}

// Pre-processes one cluster: one holder of the smallest value takes the second
// smallest value and one holder of the largest takes the second largest.
// Positions are preserved.
inline std::vector<double> preprocess_cluster_values(
    std::span<const double> values) {
  const ClusterExtremes e = cluster_extremes(values);
  std::vector<double> out(values.begin(), values.end());
  const std::size_t lo = position_of_min(values);
  const std::size_t hi = position_of_max(values);
  out[lo] = e.min_second;
  out[hi] = e.max_second;
  return out;
}

// Pre-processes every cluster of one attribute. Within a cluster, ties for
// the extreme values resolve to the lowest record index.
inline std::vector<double> preprocess_column(std::span<const double> column,
                                             const Clustering& clustering) {
  require(clustering.assignment.size() == column.size(), ErrorCode::kAlignment,
          "clustering of '" + clustering.attribute +
              "' does not match the record count");
  std::vector<double> out(column.begin(), column.end());
  std::vector<std::size_t> members;
  std::vector<double> values;
  for (const Cluster& cluster : clustering.clusters) {
    require(cluster.size() >= 3, ErrorCode::kParameter,
            "pre-processing needs clusters of at least three values (k >= 3)");
    members = cluster.members;
    std::sort(members.begin(), members.end());
    values.clear();
    for (std::size_t i : members) values.push_back(column[i]);
    const std::vector<double> processed = preprocess_cluster_values(values);
    for (std::size_t p = 0; p < members.size(); ++p) {
      out[members[p]] = processed[p];
    }
  }
  return out;
}

// Applies the pre-processing to every attribute. The clusterings must come
// from the same dataset; membership is left as is.
inline Dataset preprocess_cbls(const Dataset& d,
                               std::span<const Clustering> clusterings) {
  require(clusterings.size() == d.cols(), ErrorCode::kParameter,
          "expected one clustering per attribute");
  std::vector<std::vector<double>> columns;
  columns.reserve(d.cols());
  for (std::size_t j = 0; j < d.cols(); ++j) {
    columns.push_back(preprocess_column(d.column(j), clusterings[j]));
  }
  return d.with_columns(std::move(columns), Stage::kPreprocessed);
}

// Debug dump: attribute,cluster_index,size,min,max,centroid.
inline void write_cluster_dump(std::ostream& out,
                               std::span<const Clustering> clusterings,
                               const Dataset& source) {
  out << "attribute,cluster_index,size,min,max,centroid\n";
  for (std::size_t j = 0; j < clusterings.size(); ++j) {
    const Clustering& clustering = clusterings[j];
    const auto column = source.column(source.attribute_index(clustering.attribute));
    for (std::size_t c = 0; c < clustering.clusters.size(); ++c) {
      const Cluster& cluster = clustering.clusters[c];
      const auto values = clustering.values_of(c, column);
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      out << csv::quote(clustering.attribute) << ',' << c << ','
          << cluster.size() << ',' << csv::format_double(*lo) << ','
          << csv::format_double(*hi) << ','
          << csv::format_double(cluster.centroid) << '\n';
    }
  }
}

}  // namespace idpm

#endif  // IDPM_MICROAGGREGATION_HPP_
