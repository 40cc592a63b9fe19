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

// Release mechanisms.
//
//   dp        Laplace noise on every value, scale (maxA - minA) / eps_a.
//   dp-um     individual-ranking microaggregation, then one Laplace draw per
//             cluster scaled to the centroid's global sensitivity.
//   idp-ls    as dp-um with the centroid's local sensitivity.
//   idp-cbls  clusters are pre-processed (extremes replaced by second
//             extremes) before taking centroids; noise is scaled to the
//             cluster-based local sensitivity, which needs no domain bounds.
//
// Every cluster draws from its own engine keyed by (seed, attribute,
// cluster), so the output is a pure function of input, configuration and seed.

#ifndef IDPM_MECHANISMS_HPP_
#define IDPM_MECHANISMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idpm/budget.hpp"
#include "idpm/dataset.hpp"
#include "idpm/error.hpp"
#include "idpm/laplace.hpp"
#include "idpm/microaggregation.hpp"
#include "idpm/parallel.hpp"
#include "idpm/sensitivity.hpp"

namespace idpm {

enum class Method { kDp, kDpUm, kIdpLs, kIdpCbls };

inline constexpr Method kAllMethods[] = {Method::kDp, Method::kDpUm,
                                         Method::kIdpLs, Method::kIdpCbls};

inline std::string_view method_name(Method method) {
  switch (method) {
    case Method::kDp:
      return "dp";
    case Method::kDpUm:
      return "dp-um";
    case Method::kIdpLs:
      return "idp-ls";
    case Method::kIdpCbls:
      return "idp-cbls";
  }
  return "unknown";
}

inline std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

inline bool method_needs_domains(Method m) { return m != Method::kIdpCbls; }
inline bool method_microaggregates(Method m) { return m != Method::kDp; }
inline std::size_t method_min_k(Method m) {
  return m == Method::kIdpCbls ? 3 : 1;
}

struct NoiseDraw {
  std::size_t attribute = 0;
  std::size_t cluster = 0;  // record index for dp
  double scale = 0.0;       // sensitivity / eps_a
  double value = 0.0;
};

struct MaskOptions {
  bool clamp = true;
  unsigned threads = 1;
  bool record_draws = true;
};

struct MaskResult {
  Dataset masked;
  PrivacyBudget budget;
  std::vector<Clustering> clusterings;  // empty for dp
  std::vector<SensitivityProfile> sensitivities;
  std::vector<NoiseDraw> draws;
  bool clamped = false;
};

namespace internal {

inline void check_budget(const Dataset& d, const PrivacyBudget& budget) {
  require(budget.shares.size() == d.cols(), ErrorCode::kParameter,
          "budget has " + std::to_string(budget.shares.size()) +
              " shares for " + std::to_string(d.cols()) + " attributes");
  for (double share : budget.shares) {
    require(share > 0.0, ErrorCode::kParameter,
            "every attribute needs a positive budget share");
  }
}

inline void check_original(const Dataset& d) {
  require(d.stage() == Stage::kOriginal, ErrorCode::kParameter,
          "mechanisms take the original dataset, got a " +
              std::string(stage_name(d.stage())) + " one");
}

struct AttributeOutput {
  std::vector<double> column;
  Clustering clustering;
  SensitivityProfile profile;
  std::vector<NoiseDraw> draws;
};

// Shared body of the three microaggregation mechanisms.
inline MaskResult mask_by_clusters(const Dataset& d,
                                   std::span<const AttributeDomain> domains,
                                   const PrivacyBudget& budget, std::size_t k,
                                   std::uint64_t seed, SensitivityKind kind,
                                   const MaskOptions& options) {
  check_original(d);
  check_budget(d, budget);
  const bool have_domains = !domains.empty();
  if (have_domains) {
    require(domains.size() == d.cols(), ErrorCode::kParameter,
            "expected one domain per attribute");
  }
  require(kind == SensitivityKind::kClusterBasedLocal || have_domains,
          ErrorCode::kParameter, "this mechanism needs attribute domains");
  const bool clamp = options.clamp && have_domains;
  if (kind != SensitivityKind::kClusterBasedLocal) {
    check_within_domains(d, domains);
  }

  std::vector<AttributeOutput> outputs(d.cols());
  parallel_for(d.cols(), options.threads, [&](std::size_t a) {
    const auto column = d.column(a);
    AttributeOutput& out = outputs[a];
    out.clustering = individual_ranking_cluster(column, k, d.attributes()[a]);
    const AttributeDomain* domain = have_domains ? &domains[a] : nullptr;
    out.profile = compute_profile(kind, out.clustering, column, domain);

    std::vector<double> centers;
    if (kind == SensitivityKind::kClusterBasedLocal) {
      const std::vector<double> processed =
          preprocess_column(column, out.clustering);
      for (std::size_t c = 0; c < out.clustering.clusters.size(); ++c) {
        centers.push_back(
            centroid_of(out.clustering.values_of(c, processed)));
      }
    } else {
      for (const Cluster& cluster : out.clustering.clusters) {
        centers.push_back(cluster.centroid);
      }
    }

    out.column.resize(d.rows());
    for (std::size_t c = 0; c < out.clustering.clusters.size(); ++c) {
      const double scale = out.profile.clusters[c].value / budget.shares[a];
      NoiseEngine engine = noise_stream(seed, a, c);
      const double noise = laplace_sample(engine, scale);
      double masked = centers[c] + noise;
      if (clamp) masked = std::clamp(masked, domain->lower, domain->upper);
      for (std::size_t i : out.clustering.clusters[c].members) {
        out.column[i] = masked;
      }
      if (options.record_draws) out.draws.push_back({a, c, scale, noise});
    }
  });

  MaskResult result{d, budget, {}, {}, {}, clamp};
  std::vector<std::vector<double>> columns;
  for (AttributeOutput& out : outputs) {
    columns.push_back(std::move(out.column));
    result.clusterings.push_back(std::move(out.clustering));
    result.sensitivities.push_back(std::move(out.profile));
    result.draws.insert(result.draws.end(), out.draws.begin(),
                        out.draws.end());
  }
  result.masked = d.with_columns(std::move(columns), Stage::kMasked);
  return result;
}

}  // namespace internal

// Identity query per record: each value gets its own draw with scale
// (maxA - minA) / eps_a.
inline MaskResult mechanism_dp(const Dataset& d,
                               std::span<const AttributeDomain> domains,
                               const PrivacyBudget& budget, std::uint64_t seed,
                               const MaskOptions& options = {}) {
  internal::check_original(d);
  internal::check_budget(d, budget);
  check_within_domains(d, domains);

  std::vector<std::vector<double>> columns(d.cols());
  std::vector<std::vector<NoiseDraw>> draws(d.cols());
  std::vector<SensitivityProfile> profiles(d.cols());
  parallel_for(d.cols(), options.threads, [&](std::size_t a) {
    const AttributeDomain& domain = domains[a];
    const double sensitivity = global_centroid_sensitivity(domain, 1);
    const double scale = sensitivity / budget.shares[a];
    profiles[a] = {d.attributes()[a],
                   {{SensitivityKind::kGlobal, sensitivity, 1}}};
    const auto column = d.column(a);
    columns[a].resize(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i) {
      NoiseEngine engine = noise_stream(seed, a, i);
      const double noise = laplace_sample(engine, scale);
      double masked = column[i] + noise;
      if (options.clamp) {
        masked = std::clamp(masked, domain.lower, domain.upper);
      }
      columns[a][i] = masked;
      if (options.record_draws) draws[a].push_back({a, i, scale, noise});
    }
  });

  MaskResult result{d.with_columns(std::move(columns), Stage::kMasked),
                    budget, {}, std::move(profiles), {}, options.clamp};
  for (auto& per_attribute : draws) {
    result.draws.insert(result.draws.end(), per_attribute.begin(),
                        per_attribute.end());
  }
  return result;
}

inline MaskResult mechanism_dp_um(const Dataset& d,
                                  std::span<const AttributeDomain> domains,
                                  const PrivacyBudget& budget, std::size_t k,
                                  std::uint64_t seed,
                                  const MaskOptions& options = {}) {
  return internal::mask_by_clusters(d, domains, budget, k, seed,
                                    SensitivityKind::kGlobal, options);
}

inline MaskResult mechanism_idp_ls(const Dataset& d,
                                   std::span<const AttributeDomain> domains,
                                   const PrivacyBudget& budget, std::size_t k,
                                   std::uint64_t seed,
                                   const MaskOptions& options = {}) {
  return internal::mask_by_clusters(d, domains, budget, k, seed,
                                    SensitivityKind::kLocal, options);
}

// Domains are optional and only used for clamping the output.
inline MaskResult mechanism_idp_cbls(
    const Dataset& d, const PrivacyBudget& budget, std::size_t k,
    std::uint64_t seed, const MaskOptions& options = {},
    std::span<const AttributeDomain> clamp_domains = {}) {
  require(k >= 3, ErrorCode::kParameter, "k must be >= 3 for idp-cbls");
  return internal::mask_by_clusters(d, clamp_domains, budget, k, seed,
                                    SensitivityKind::kClusterBasedLocal,
                                    options);
}

// ---------------------------------------------------------------------------
// Configuration-driven entry point
// ---------------------------------------------------------------------------

struct MechanismConfig {
  Method method = Method::kIdpCbls;
  double epsilon = 1.0;
  std::size_t k = 3;  // ignored for dp
  // Domain source: alpha-scaling or explicit bounds (one pair per attribute).
  std::optional<double> alpha;
  std::vector<std::pair<double, double>> domains;
  std::uint64_t seed = 0;
  // Unset: on whenever domains are available.
  std::optional<bool> clamp;
  std::vector<double> weights;  // empty: equal split
  unsigned threads = 1;
};

inline void validate(const MechanismConfig& config) {
  require(std::isfinite(config.epsilon) && config.epsilon > 0.0,
          ErrorCode::kParameter, "epsilon must be positive");
  const std::size_t min_k = method_min_k(config.method);
  if (method_microaggregates(config.method)) {
    require(config.k >= min_k, ErrorCode::kParameter,
            "k must be >= " + std::to_string(min_k) + " for " +
                std::string(method_name(config.method)));
  }
  require(!(config.alpha && !config.domains.empty()), ErrorCode::kParameter,
          "give either alpha or explicit domains, not both");
  if (config.alpha) {
    require(std::isfinite(*config.alpha) && *config.alpha > 0.0,
            ErrorCode::kParameter, "alpha must be positive");
  }
  require(!method_needs_domains(config.method) || config.alpha ||
              !config.domains.empty(),
          ErrorCode::kParameter,
          std::string(method_name(config.method)) +
              " needs bounded domains (alpha or explicit domains)");
}

inline std::vector<AttributeDomain> resolve_domains(
    const Dataset& d, const MechanismConfig& config) {
  if (config.alpha) return compute_domains(d, *config.alpha);
  if (!config.domains.empty()) return explicit_domains(d, config.domains);
  return {};
}

inline MaskResult anonymize(const Dataset& d, const MechanismConfig& config) {
  validate(config);
  const std::vector<AttributeDomain> domains = resolve_domains(d, config);
  const PrivacyBudget budget =
      allocate_budget(config.epsilon, d.cols(), config.weights);
  MaskOptions options;
  options.clamp = config.clamp.value_or(true);
  options.threads = config.threads;
  switch (config.method) {
    case Method::kDp:
      return mechanism_dp(d, domains, budget, config.seed, options);
    case Method::kDpUm:
      return mechanism_dp_um(d, domains, budget, config.k, config.seed,
                             options);
    case Method::kIdpLs:
      return mechanism_idp_ls(d, domains, budget, config.k, config.seed,
                              options);
    case Method::kIdpCbls:
      return mechanism_idp_cbls(d, budget, config.k, config.seed, options,
                                domains);
  }
  fail(ErrorCode::kParameter, "unknown method");
}

}  // namespace idpm

#endif  // IDPM_MECHANISMS_HPP_
