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

#ifndef IDPM_BUDGET_HPP_
#define IDPM_BUDGET_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "idpm/error.hpp"

namespace idpm {

// Total epsilon and its split over attributes (sequential composition).
// Every cluster of an attribute is masked with that attribute's full share,
// since clusters hold disjoint records.
struct PrivacyBudget {
  double total = 0.0;
  std::vector<double> shares;
};

// Equal split by default; otherwise shares proportional to `weights`.
inline PrivacyBudget allocate_budget(double epsilon, std::size_t attributes,
                                     std::span<const double> weights = {}) {
  require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kParameter,
          "epsilon must be positive");
  require(attributes >= 1, ErrorCode::kParameter,
          "budget needs at least one attribute");
  PrivacyBudget budget{epsilon, {}};
  if (weights.empty()) {
    budget.shares.assign(attributes, epsilon / static_cast<double>(attributes));
    return budget;
  }
  require(weights.size() == attributes, ErrorCode::kParameter,
          "expected " + std::to_string(attributes) + " weights, got " +
              std::to_string(weights.size()));
  double total_weight = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w > 0.0, ErrorCode::kParameter,
            "budget weights must be positive");
    total_weight += w;
  }
  for (double w : weights) budget.shares.push_back(epsilon * w / total_weight);
  return budget;
}

}  // namespace idpm

#endif  // IDPM_BUDGET_HPP_
