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

// Grid runner: every (alpha, epsilon, method, k) cell is masked `repetitions`
// times and scored by mean SSE against the original data.

#ifndef IDPM_EXPERIMENT_HPP_
#define IDPM_EXPERIMENT_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "idpm/budget.hpp"
#include "idpm/csv.hpp"
#include "idpm/dataset.hpp"
#include "idpm/error.hpp"
#include "idpm/evaluation.hpp"
#include "idpm/laplace.hpp"
#include "idpm/mechanisms.hpp"
#include "idpm/parallel.hpp"

namespace idpm {

struct ExperimentGrid {
  std::vector<Method> methods;
  std::vector<double> epsilons;
  std::vector<std::size_t> ks;
  std::vector<double> alphas;
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 0;
};

// k is 0 for dp rows, which involve no microaggregation.
struct ExperimentResult {
  Method method = Method::kDp;
  double epsilon = 0.0;
  std::size_t k = 0;
  double alpha = 0.0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double sse = 0.0;
  double mean_sse = 0.0;
};

struct CellAverage {
  Method method = Method::kDp;
  double epsilon = 0.0;
  std::size_t k = 0;
  double alpha = 0.0;
  std::size_t runs = 0;
  double mean_sse = 0.0;  // average of the per-run mean SSE
};

struct ExperimentReport {
  std::vector<ExperimentResult> results;
  std::vector<CellAverage> averages;
  std::vector<std::string> warnings;
};

struct ExperimentOptions {
  unsigned threads = 1;
  DistanceNormalization normalization = DistanceNormalization::kVariance;
  bool clamp = true;
};

// Seed of repetition `run`. It does not depend on the cell, so every method
// and parameter setting of one repetition sees the same noise streams and
// cells can be compared pairwise.
inline std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) {
  return hash_words({base_seed, static_cast<std::uint64_t>(run)});
}

inline void validate(const ExperimentGrid& grid) {
  require(!grid.methods.empty(), ErrorCode::kParameter, "no methods in grid");
  require(!grid.epsilons.empty(), ErrorCode::kParameter, "no epsilons in grid");
  require(!grid.alphas.empty(), ErrorCode::kParameter, "no alphas in grid");
  require(grid.repetitions >= 1, ErrorCode::kParameter,
          "repetitions must be at least 1");
  bool microaggregating = false;
  for (Method m : grid.methods) microaggregating |= method_microaggregates(m);
  require(!microaggregating || !grid.ks.empty(), ErrorCode::kParameter,
          "no k values in grid");
  for (double e : grid.epsilons) {
    require(std::isfinite(e) && e > 0.0, ErrorCode::kParameter,
            "epsilon values must be positive");
  }
  for (double a : grid.alphas) {
    require(std::isfinite(a) && a > 0.0, ErrorCode::kParameter,
            "alpha values must be positive");
  }
}

inline SseResult mask_and_score(const Dataset& d,
                             const std::vector<AttributeDomain>& domains,
                             const ColumnStats& stats, Method method,
                             double epsilon, std::size_t k, std::uint64_t seed,
                             const ExperimentOptions& options) {
  const PrivacyBudget budget = allocate_budget(epsilon, d.cols());
  MaskOptions mask_options;
  mask_options.clamp = options.clamp;
  mask_options.record_draws = false;
  MaskResult masked = [&] {
    switch (method) {
      case Method::kDp:
        return mechanism_dp(d, domains, budget, seed, mask_options);
      case Method::kDpUm:
        return mechanism_dp_um(d, domains, budget, k, seed, mask_options);
      case Method::kIdpLs:
        return mechanism_idp_ls(d, domains, budget, k, seed, mask_options);
      case Method::kIdpCbls:
        break;
    }
    return mechanism_idp_cbls(d, budget, k, seed, mask_options, domains);
  }();
  return sse(d, masked.masked, stats, options.normalization);
}

inline ExperimentReport run_experiment(const ExperimentGrid& grid,
                                       const Dataset& d,
                                       const ExperimentOptions& options = {}) {
  validate(grid);
  ExperimentReport report;
  const ColumnStats stats = column_stats(d);
  for (std::size_t j = 0; j < stats.size(); ++j) {
    if (stats.variance[j] == 0.0) {
      report.warnings.push_back("attribute '" + stats.attributes[j] +
                                "' has zero variance and is left out of SSE");
    }
  }

  struct Cell {
    Method method;
    double epsilon;
    std::size_t k;
    double alpha;
    std::size_t domain_index;
  };
  std::vector<std::vector<AttributeDomain>> domains;
  std::vector<Cell> cells;
  for (std::size_t ai = 0; ai < grid.alphas.size(); ++ai) {
    domains.push_back(compute_domains(d, grid.alphas[ai]));
    for (double epsilon : grid.epsilons) {
      for (Method method : grid.methods) {
        if (!method_microaggregates(method)) {
          cells.push_back({method, epsilon, 0, grid.alphas[ai], ai});
          continue;
        }
        for (std::size_t k : grid.ks) {
          if (k < method_min_k(method) || k > d.rows()) {
            report.warnings.push_back(
                "skipping " + std::string(method_name(method)) +
                " with k = " + std::to_string(k) +
                (k > d.rows() ? " (exceeds record count)"
                              : " (below minimum " +
                                    std::to_string(method_min_k(method)) +
                                    ")"));
            continue;
          }
          cells.push_back({method, epsilon, k, grid.alphas[ai], ai});
        }
      }
    }
  }

  const std::size_t jobs = cells.size() * grid.repetitions;
  report.results.resize(jobs);
  parallel_for(jobs, options.threads, [&](std::size_t job) {
    const Cell& cell = cells[job / grid.repetitions];
    const std::size_t run = job % grid.repetitions;
    const std::uint64_t seed = run_seed(grid.base_seed, run);
    const SseResult score =
        mask_and_score(d, domains[cell.domain_index], stats, cell.method,
                       cell.epsilon, cell.k, seed, options);
    report.results[job] = {cell.method, cell.epsilon, cell.k, cell.alpha,
                           run,         seed,         score.sse,
                           score.mean_sse};
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    double total = 0.0;
    for (std::size_t r = 0; r < grid.repetitions; ++r) {
      total += report.results[c * grid.repetitions + r].mean_sse;
    }
    report.averages.push_back(
        {cells[c].method, cells[c].epsilon, cells[c].k, cells[c].alpha,
         grid.repetitions, total / static_cast<double>(grid.repetitions)});
  }
  return report;
}

inline void write_results_csv(std::ostream& out,
                              const std::vector<ExperimentResult>& results) {
  out << "method,epsilon,k,alpha,run,sse,mean_sse\n";
  for (const ExperimentResult& r : results) {
    out << method_name(r.method) << ',' << csv::format_double(r.epsilon) << ','
        << r.k << ',' << csv::format_double(r.alpha) << ',' << r.run << ','
        << csv::format_double(r.sse) << ',' << csv::format_double(r.mean_sse)
        << '\n';
  }
}

inline void write_averages_csv(std::ostream& out,
                               const std::vector<CellAverage>& averages) {
  out << "method,epsilon,k,alpha,runs,mean_sse\n";
  for (const CellAverage& a : averages) {
    out << method_name(a.method) << ',' << csv::format_double(a.epsilon) << ','
        << a.k << ',' << csv::format_double(a.alpha) << ',' << a.runs << ','
        << csv::format_double(a.mean_sse) << '\n';
  }
}

}  // namespace idpm

#endif  // IDPM_EXPERIMENT_HPP_
