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

// Noise calibration for cluster centroids.
//
// Three sensitivities are provided, each expressed both as the maximum change
// of the cluster *sum* a single record can cause (the `*_sum_change`
// functions) and as the corresponding change of the centroid (sum change
// divided by the cluster size):
//
//   global               (maxA - minA) / |C|
//   local                max{maxA - min C, max C - minA} / |C|
//   cluster-based local  change of the pre-processed cluster sum when its
//                        smallest value jumps above the largest (or the
//                        largest drops below the smallest), over |P|.
//
// The cluster-based value reads only the cluster's order statistics, never
// the attribute domain.

#ifndef IDPM_SENSITIVITY_HPP_
#define IDPM_SENSITIVITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idpm/csv.hpp"
#include "idpm/dataset.hpp"
#include "idpm/error.hpp"
#include "idpm/microaggregation.hpp"

namespace idpm {

inline double global_centroid_sum_change(const AttributeDomain& domain) {
  require(domain.lower <= domain.upper, ErrorCode::kParameter,
          "invalid domain for '" + domain.name + "'");
  return domain.width();
}

inline double global_centroid_sensitivity(const AttributeDomain& domain,
                                          std::size_t cluster_size) {
  require(cluster_size >= 1, ErrorCode::kParameter,
          "cluster size must be at least 1");
  return global_centroid_sum_change(domain) /
         static_cast<double>(cluster_size);
}

inline double local_centroid_sum_change(std::span<const double> cluster,
                                        const AttributeDomain& domain) {
  require(!cluster.empty(), ErrorCode::kParameter, "empty cluster");
  const auto [lo, hi] = std::minmax_element(cluster.begin(), cluster.end());
  require(domain.contains(*lo) && domain.contains(*hi), ErrorCode::kDomain,
          "cluster of '" + domain.name + "' has values outside [" +
              csv::format_double(domain.lower) + ", " +
              csv::format_double(domain.upper) + "]");
  return std::max(domain.upper - *lo, *hi - domain.lower);
}

// Evaluated on the original record values of the cluster.
inline double local_centroid_sensitivity(std::span<const double> cluster,
                                         const AttributeDomain& domain) {
  return local_centroid_sum_change(cluster, domain) /
         static_cast<double>(cluster.size());
}

inline double cbls_sum_change(const ClusterExtremes& e) {
  const double upward = std::abs(e.max - e.min_second) +
                        std::abs(e.min_third - e.min_second) +
                        std::abs(e.max - e.max_second);
  const double downward = std::abs(e.min - e.max_second) +
                          std::abs(e.max_third - e.max_second) +
                          std::abs(e.min - e.min_second);
  return std::max(upward, downward);
}

inline double cbls_sensitivity(const ClusterExtremes& extremes,
                               std::size_t cluster_size) {
  require(cluster_size >= 3, ErrorCode::kParameter,
          "cluster-based sensitivity needs clusters of at least three values");
  return cbls_sum_change(extremes) / static_cast<double>(cluster_size);
}

inline double cbls_sensitivity(std::span<const double> cluster) {
  return cbls_sensitivity(cluster_extremes(cluster), cluster.size());
}

// ---------------------------------------------------------------------------
// Per-attribute profiles and the sensitivity report
// ---------------------------------------------------------------------------

enum class SensitivityKind { kGlobal, kLocal, kClusterBasedLocal };

inline std::string_view sensitivity_kind_name(SensitivityKind kind) {
  switch (kind) {
    case SensitivityKind::kGlobal:
      return "global";
    case SensitivityKind::kLocal:
      return "local";
    case SensitivityKind::kClusterBasedLocal:
      return "cluster_based_local";
  }
  return "unknown";
}

struct ClusterSensitivity {
  SensitivityKind kind = SensitivityKind::kGlobal;
  double value = 0.0;
  std::size_t size = 0;
};

struct SensitivityProfile {
  std::string attribute;
  std::vector<ClusterSensitivity> clusters;
};

// `column` holds the original values the clustering was built from. The
// domain is ignored for the cluster-based kind.
inline SensitivityProfile compute_profile(SensitivityKind kind,
                                          const Clustering& clustering,
                                          std::span<const double> column,
                                          const AttributeDomain* domain) {
  require(kind == SensitivityKind::kClusterBasedLocal || domain != nullptr,
          ErrorCode::kParameter,
          std::string(sensitivity_kind_name(kind)) +
              " sensitivity needs an attribute domain");
  SensitivityProfile profile{clustering.attribute, {}};
  profile.clusters.reserve(clustering.clusters.size());
  for (std::size_t c = 0; c < clustering.clusters.size(); ++c) {
    const std::size_t size = clustering.clusters[c].size();
    double value = 0.0;
    switch (kind) {
      case SensitivityKind::kGlobal:
        value = global_centroid_sensitivity(*domain, size);
        break;
      case SensitivityKind::kLocal:
        value = local_centroid_sensitivity(clustering.values_of(c, column),
                                           *domain);
        break;
      case SensitivityKind::kClusterBasedLocal:
        value = cbls_sensitivity(clustering.values_of(c, column));
        break;
    }
    profile.clusters.push_back({kind, value, size});
  }
  return profile;
}

// attribute,cluster_index,kind,size,sensitivity
inline void write_sensitivity_report(
    std::ostream& out, std::span<const SensitivityProfile> profiles) {
  out << "attribute,cluster_index,kind,size,sensitivity\n";
  for (const SensitivityProfile& profile : profiles) {
    for (std::size_t c = 0; c < profile.clusters.size(); ++c) {
      const ClusterSensitivity& s = profile.clusters[c];
      out << csv::quote(profile.attribute) << ',' << c << ','
          << sensitivity_kind_name(s.kind) << ',' << s.size << ','
          << csv::format_double(s.value) << '\n';
    }
  }
}

}  // namespace idpm

#endif  // IDPM_SENSITIVITY_HPP_
