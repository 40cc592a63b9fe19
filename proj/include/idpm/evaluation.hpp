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

// Information loss between an original dataset and its masked version.
//
//   d(x, y) = (1/m) * sqrt( sum_j (|x_j - y_j| / s_j)^2 )
//
// where s_j is the sample variance of attribute j in the original data
// (or, optionally, its standard deviation). SSE sums d^2 over records;
// mean SSE divides by the record count.

#ifndef IDPM_EVALUATION_HPP_
#define IDPM_EVALUATION_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "idpm/dataset.hpp"
#include "idpm/error.hpp"

namespace idpm {

enum class DistanceNormalization { kVariance, kStandardDeviation };

inline double normalizer(const ColumnStats& stats, std::size_t j,
                         DistanceNormalization normalization) {
  return normalization == DistanceNormalization::kVariance
             ? stats.variance[j]
             : std::sqrt(stats.variance[j]);
}

inline double record_distance(
    std::span<const double> x, std::span<const double> y,
    const ColumnStats& stats,
    DistanceNormalization normalization = DistanceNormalization::kVariance) {
  require(x.size() == y.size() && x.size() == stats.size(),
          ErrorCode::kAlignment, "records and statistics differ in width");
  require(!x.empty(), ErrorCode::kParameter, "empty record");
  double squares = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double diff = std::abs(x[j] - y[j]);
    if (diff == 0.0) continue;
    const double s = normalizer(stats, j, normalization);
    require(s > 0.0, ErrorCode::kDegenerate,
            "attribute '" + stats.attributes[j] +
                "' has zero variance but the records differ on it");
    squares += (diff / s) * (diff / s);
  }
  return std::sqrt(squares) / static_cast<double>(x.size());
}

struct SseResult {
  double sse = 0.0;
  double mean_sse = 0.0;
  // Zero-variance attributes left out of the distance.
  std::vector<std::string> excluded_attributes;
};

// Zero-variance attributes are dropped (the distance is undefined on them)
// and m counts the remaining attributes.
inline SseResult sse(
    const Dataset& original, const Dataset& masked, const ColumnStats& stats,
    DistanceNormalization normalization = DistanceNormalization::kVariance) {
  require(original.rows() == masked.rows(), ErrorCode::kAlignment,
          "original has " + std::to_string(original.rows()) +
              " rows, masked has " + std::to_string(masked.rows()));
  require(original.attributes() == masked.attributes(), ErrorCode::kAlignment,
          "original and masked attributes differ");
  require(stats.attributes == original.attributes(), ErrorCode::kAlignment,
          "statistics do not describe these attributes");

  SseResult result;
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < original.cols(); ++j) {
    if (normalizer(stats, j, normalization) > 0.0) {
      active.push_back(j);
    } else {
      result.excluded_attributes.push_back(original.attributes()[j]);
    }
  }
  require(!active.empty(), ErrorCode::kDegenerate,
          "every attribute has zero variance");

  const double m = static_cast<double>(active.size());
  std::vector<double> weights;
  for (std::size_t j : active) {
    const double s = normalizer(stats, j, normalization);
    weights.push_back(1.0 / (s * s));
  }
  // d^2 = (1/m^2) * sum_j diff_j^2 / s_j^2, accumulated per record.
  for (std::size_t i = 0; i < original.rows(); ++i) {
    double squares = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const double diff =
          original.value(i, active[a]) - masked.value(i, active[a]);
      squares += diff * diff * weights[a];
    }
    result.sse += squares / (m * m);
  }
  result.mean_sse = result.sse / static_cast<double>(original.rows());
  return result;
}

}  // namespace idpm

#endif  // IDPM_EVALUATION_HPP_
