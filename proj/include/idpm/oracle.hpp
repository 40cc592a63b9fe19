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

// Brute-force sensitivity oracles. They enumerate single-record replacements
// and recompute cluster sums from scratch, sharing no code with the
// closed-form expressions in sensitivity.hpp.

#ifndef IDPM_ORACLE_HPP_
#define IDPM_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "idpm/dataset.hpp"
#include "idpm/error.hpp"
#include "idpm/microaggregation.hpp"

namespace idpm::oracle {

namespace internal {

inline double naive_sum(std::span<const double> values) {
  double sum = 0.0;
  for (double x : values) sum += x;
  return sum;
}

}  // namespace internal

// max over records r and v in {minA, maxA} of |sum(C with r := v) - sum(C)|.
inline double local_sum_change(std::span<const double> cluster,
                               const AttributeDomain& domain) {
  require(!cluster.empty(), ErrorCode::kParameter, "empty cluster");
  const double base = internal::naive_sum(cluster);
  std::vector<double> modified(cluster.begin(), cluster.end());
  double best = 0.0;
  for (std::size_t r = 0; r < cluster.size(); ++r) {
    for (double v : {domain.lower, domain.upper}) {
      modified[r] = v;
      best = std::max(best, std::abs(internal::naive_sum(modified) - base));
    }
    modified[r] = cluster[r];
  }
  return best;
}

inline double local_sensitivity(std::span<const double> cluster,
                                const AttributeDomain& domain) {
  return local_sum_change(cluster, domain) /
         static_cast<double>(cluster.size());
}

// Candidate replacement values: domain endpoints, a uniform grid of
// `grid_points` over the domain, and every value already in the cluster.
inline std::vector<double> replacement_candidates(
    std::span<const double> cluster, const AttributeDomain& domain,
    std::size_t grid_points) {
  std::vector<double> candidates{domain.lower, domain.upper};
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double t =
        static_cast<double>(g) / static_cast<double>(grid_points - 1);
    candidates.push_back(domain.lower + t * domain.width());
  }
  candidates.insert(candidates.end(), cluster.begin(), cluster.end());
  return candidates;
}

// max over records r and candidate v of the change in the sum of the
// pre-processed cluster, membership held fixed.
inline double cbls_sum_change(std::span<const double> cluster,
                              const AttributeDomain& domain,
                              std::size_t grid_points) {
  require(cluster.size() >= 3, ErrorCode::kParameter,
          "cluster must hold at least three values");
  require(grid_points >= 2, ErrorCode::kParameter,
          "grid needs at least two points");
  const double base =
      internal::naive_sum(preprocess_cluster_values(cluster));
  const std::vector<double> candidates =
      replacement_candidates(cluster, domain, grid_points);
  std::vector<double> modified(cluster.begin(), cluster.end());
  double best = 0.0;
  for (std::size_t r = 0; r < cluster.size(); ++r) {
    for (double v : candidates) {
      modified[r] = v;
      const double sum =
          internal::naive_sum(preprocess_cluster_values(modified));
      best = std::max(best, std::abs(sum - base));
    }
    modified[r] = cluster[r];
  }
  return best;
}

inline double cbls_sensitivity(std::span<const double> cluster,
                               const AttributeDomain& domain,
                               std::size_t grid_points) {
  return cbls_sum_change(cluster, domain, grid_points) /
         static_cast<double>(cluster.size());
}

}  // namespace idpm::oracle

#endif  // IDPM_ORACLE_HPP_
