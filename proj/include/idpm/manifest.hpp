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

// JSON run manifest written next to every masked dataset.

#ifndef IDPM_MANIFEST_HPP_
#define IDPM_MANIFEST_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "idpm/dataset.hpp"
#include "idpm/mechanisms.hpp"
#include "idpm/sensitivity.hpp"
#include "idpm/version.hpp"
#include "json.hpp"

namespace idpm {

struct SensitivityDigest {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

inline SensitivityDigest digest(const SensitivityProfile& profile) {
  std::vector<double> values;
  for (const ClusterSensitivity& s : profile.clusters) values.push_back(s.value);
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median =
      n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return {values.front(), median, values.back()};
}

inline nlohmann::ordered_json build_manifest(
    const MechanismConfig& config, const MaskResult& result,
    const std::vector<AttributeDomain>& domains, const std::string& input,
    const std::string& output) {
  nlohmann::ordered_json config_json;
  config_json["input"] = input;
  config_json["output"] = output;
  config_json["method"] = std::string(method_name(config.method));
  config_json["epsilon"] = config.epsilon;
  if (method_microaggregates(config.method)) {
    config_json["k"] = config.k;
  } else {
    config_json["k"] = nullptr;
  }
  if (config.alpha) {
    config_json["alpha"] = *config.alpha;
  } else {
    config_json["alpha"] = nullptr;
  }
  config_json["seed"] = config.seed;
  config_json["clamp"] = result.clamped;
  config_json["weights"] = config.weights;

  nlohmann::ordered_json attributes = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < result.masked.cols(); ++a) {
    nlohmann::ordered_json entry;
    entry["name"] = result.masked.attributes()[a];
    entry["epsilon"] = result.budget.shares[a];
    if (!domains.empty()) {
      entry["domain"] = {domains[a].lower, domains[a].upper};
    } else {
      entry["domain"] = nullptr;
    }
    const SensitivityProfile& profile = result.sensitivities[a];
    const SensitivityDigest d = digest(profile);
    entry["sensitivity"] = {
        {"kind", profile.clusters.empty()
                     ? std::string("none")
                     : std::string(sensitivity_kind_name(
                           profile.clusters.front().kind))},
        {"clusters", profile.clusters.size()},
        {"min", d.min},
        {"median", d.median},
        {"max", d.max}};
    attributes.push_back(std::move(entry));
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "idpm";
  manifest["tool_version"] = kToolVersion;
  manifest["schema_version"] = kSchemaVersion;
  manifest["config"] = std::move(config_json);
  manifest["epsilon_shares"] = result.budget.shares;
  manifest["records"] = result.masked.rows();
  manifest["attributes"] = std::move(attributes);
  return manifest;
}

}  // namespace idpm

#endif  // IDPM_MANIFEST_HPP_
