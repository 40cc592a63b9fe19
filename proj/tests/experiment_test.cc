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

#include "idpm/experiment.hpp"

#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace idpm {
namespace {

using ::idpm::testing::skewed_dataset;

ExperimentGrid small_grid() {
  ExperimentGrid grid;
  grid.methods = {Method::kDpUm, Method::kIdpLs};
  grid.epsilons = {0.1};
  grid.ks = {10};
  grid.alphas = {1.5};
  grid.repetitions = 10;
  grid.base_seed = 42;
  return grid;
}

TEST(RunExperimentTest, CountsRowsAndAverages) {
  const Dataset d = skewed_dataset(200, 3, 1);
  const ExperimentReport report = run_experiment(small_grid(), d);
  ASSERT_EQ(report.results.size(), 20u);
  ASSERT_EQ(report.averages.size(), 2u);
  EXPECT_TRUE(report.warnings.empty());
  for (const CellAverage& a : report.averages) EXPECT_EQ(a.runs, 10u);
  double total = 0.0;
  for (std::size_t r = 0; r < 10; ++r) total += report.results[r].mean_sse;
  EXPECT_DOUBLE_EQ(report.averages[0].mean_sse, total / 10.0);
  for (const ExperimentResult& r : report.results) {
    EXPECT_GE(r.mean_sse, 0.0);
    EXPECT_DOUBLE_EQ(r.mean_sse, r.sse / 200.0);
  }
}

TEST(RunExperimentTest, DpIsEvaluatedOncePerEpsilonAndAlpha) {
  const Dataset d = skewed_dataset(100, 2, 2);
  ExperimentGrid grid = small_grid();
  grid.methods = {Method::kDp, Method::kIdpCbls};
  grid.ks = {3, 5, 10};
  grid.epsilons = {0.1, 1.0};
  grid.alphas = {1.5, 3.0};
  grid.repetitions = 2;
  const ExperimentReport report = run_experiment(grid, d);
  std::size_t dp_rows = 0;
  for (const ExperimentResult& r : report.results) {
    if (r.method == Method::kDp) {
      ++dp_rows;
      EXPECT_EQ(r.k, 0u);
    }
  }
  EXPECT_EQ(dp_rows, 2u * 2u * 2u);
  EXPECT_EQ(report.results.size(), (2u * 2u) * (1u + 3u) * 2u);
}

TEST(RunExperimentTest, ReproducibleAcrossRunsAndThreadCounts) {
  const Dataset d = skewed_dataset(150, 3, 3);
  ExperimentGrid grid = small_grid();
  grid.methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
  grid.ks = {3, 8};
  ExperimentOptions parallel;
  parallel.threads = 3;
  const ExperimentReport a = run_experiment(grid, d);
  const ExperimentReport b = run_experiment(grid, d, parallel);
  std::ostringstream out_a;
  std::ostringstream out_b;
  write_results_csv(out_a, a.results);
  write_results_csv(out_b, b.results);
  EXPECT_EQ(out_a.str(), out_b.str());
  ASSERT_EQ(a.results.size(), b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].sse, b.results[i].sse);
  }
}

TEST(RunExperimentTest, RepetitionsUseDistinctSeedsSharedAcrossCells) {
  const Dataset d = skewed_dataset(120, 2, 4);
  const ExperimentReport report = run_experiment(small_grid(), d);
  std::set<std::uint64_t> seeds;
  for (std::size_t r = 0; r < 10; ++r) {
    seeds.insert(report.results[r].seed);
    EXPECT_EQ(report.results[r].seed, report.results[10 + r].seed);
    EXPECT_EQ(report.results[r].seed, run_seed(42, r));
  }
  EXPECT_EQ(seeds.size(), 10u);
}

TEST(RunExperimentTest, SkipsInvalidCellsWithWarning) {
  const Dataset d = skewed_dataset(50, 2, 5);
  ExperimentGrid grid = small_grid();
  grid.methods = {Method::kIdpCbls, Method::kDpUm};
  grid.ks = {2, 5, 60};
  grid.repetitions = 1;
  const ExperimentReport report = run_experiment(grid, d);
  // idp-cbls keeps only k = 5; dp-um keeps k = 2 and k = 5.
  ASSERT_EQ(report.results.size(), 3u);
  ASSERT_EQ(report.warnings.size(), 3u);
  EXPECT_NE(report.warnings[0].find("idp-cbls with k = 2"), std::string::npos)
      << report.warnings[0];
}

TEST(RunExperimentTest, WarnsAboutZeroVarianceAttributes) {
  const Dataset d = ::idpm::testing::make_dataset(
      {"x", "c"}, {{1, 2, 3, 4, 5, 6}, {3, 3, 3, 3, 3, 3}});
  ExperimentGrid grid = small_grid();
  grid.ks = {3};
  grid.repetitions = 1;
  const ExperimentReport report = run_experiment(grid, d);
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("'c'"), std::string::npos);
}

TEST(RunExperimentTest, RejectsEmptyGrids) {
  const Dataset d = skewed_dataset(50, 2, 6);
  for (int field = 0; field < 4; ++field) {
    ExperimentGrid grid = small_grid();
    if (field == 0) grid.methods.clear();
    if (field == 1) grid.epsilons.clear();
    if (field == 2) grid.ks.clear();
    if (field == 3) grid.repetitions = 0;
    EXPECT_THROW(run_experiment(grid, d), Error) << field;
  }
  ExperimentGrid dp_only = small_grid();
  dp_only.methods = {Method::kDp};
  dp_only.ks.clear();
  dp_only.repetitions = 1;
  EXPECT_EQ(run_experiment(dp_only, d).results.size(), 1u);
}

TEST(ResultsCsvTest, HeaderAndRowFormat) {
  ExperimentResult r;
  r.method = Method::kIdpCbls;
  r.epsilon = 0.01;
  r.k = 10;
  r.alpha = 1.5;
  r.run = 3;
  r.sse = 12.5;
  r.mean_sse = 0.125;
  std::ostringstream out;
  write_results_csv(out, {r});
  EXPECT_EQ(out.str(),
            "method,epsilon,k,alpha,run,sse,mean_sse\n"
            "idp-cbls,0.01,10,1.5,3,12.5,0.125\n");

  std::ostringstream averages;
  write_averages_csv(averages, {{Method::kDp, 1.0, 0, 3.0, 10, 0.5}});
  EXPECT_EQ(averages.str(),
            "method,epsilon,k,alpha,runs,mean_sse\n"
            "dp,1,0,3,10,0.5\n");
}

}  // namespace
}  // namespace idpm
