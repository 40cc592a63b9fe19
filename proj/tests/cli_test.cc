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

#include "cli.hpp"

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "idpm/dataset.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace idpm::cli {
namespace {

using ::idpm::testing::read_file;
using ::idpm::testing::TempDir;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"idpm"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : storage) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string sample_csv() {
  std::ostringstream text;
  text << "id,income,age,class\n";
  for (int i = 0; i < 40; ++i) {
    text << "r" << i << ',' << 1000 + 37 * ((i * 13) % 40) << ','
         << 20 + (i * 7) % 45 << ',' << (i % 3 == 0 ? "high" : "low") << '\n';
  }
  return text.str();
}

TEST(CliAnonymizeTest, WritesMaskedFileAndManifest) {
  TempDir dir;
  const std::string input = dir.write("in.csv", sample_csv());
  const std::string output = dir.file("out.csv");
  const Outcome o = invoke({"anonymize", "--input", input, "--output", output,
                            "--method", "idp-cbls", "--epsilon", "0.01",
                            "--k", "10", "--seed", "42", "--label-column",
                            "class"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const Dataset masked =
      load_csv(output, {.attributes = {}, .label_column = "class"});
  EXPECT_EQ(masked.rows(), 40u);
  EXPECT_EQ(masked.attributes(), (std::vector<std::string>{"income", "age"}));
  ASSERT_TRUE(masked.has_ids());
  EXPECT_EQ(masked.ids()[5], "r5");
  ASSERT_TRUE(masked.labels().has_value());

  const auto manifest =
      nlohmann::json::parse(read_file(output + ".manifest.json"));
  EXPECT_EQ(manifest["config"]["method"], "idp-cbls");
  EXPECT_EQ(manifest["config"]["seed"], 42);
  EXPECT_EQ(manifest["config"]["clamp"], false);
  EXPECT_EQ(manifest["epsilon_shares"].size(), 2u);
}

TEST(CliAnonymizeTest, RerunIsByteIdenticalAndInputUntouched) {
  TempDir dir;
  const std::string text = sample_csv();
  const std::string input = dir.write("in.csv", text);
  for (std::string method : {"dp", "dp-um", "idp-ls", "idp-cbls"}) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      const std::string output = dir.file(method + std::to_string(run));
      const Outcome o =
          invoke({"anonymize", "--input", input, "--output", output,
                  "--method", method, "--epsilon", "1", "--k", "5", "--alpha",
                  "1.5", "--seed", "7", "--label-column", "class"});
      ASSERT_EQ(o.code, kExitOk) << method << ": " << o.err;
      if (run == 0) {
        first = read_file(output);
      } else {
        EXPECT_EQ(read_file(output), first) << method;
      }
    }
  }
  EXPECT_EQ(read_file(input), text);
}

TEST(CliAnonymizeTest, UsageErrorsExitTwo) {
  TempDir dir;
  const std::string input = dir.write("in.csv", sample_csv());
  const std::string output = dir.file("out.csv");

  Outcome o = invoke({"anonymize", "--input", input, "--output", output,
                      "--method", "idp-cbls", "--epsilon", "1", "--k", "2",
                      "--seed", "1", "--label-column", "class"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("k must be ≥ 3 for idp-cbls"), std::string::npos)
      << o.err;

  o = invoke({"anonymize", "--input", input, "--output", output, "--method",
              "dp", "--epsilon", "1", "--seed", "1", "--label-column",
              "class"});
  EXPECT_EQ(o.code, kExitUsage) << o.err;

  o = invoke({"anonymize", "--input", input, "--output", output, "--method",
              "idp-ls", "--epsilon", "1", "--k", "3", "--alpha", "1.5"});
  EXPECT_EQ(o.code, kExitUsage) << "missing seed";

  o = invoke({"anonymize", "--input", input, "--output", output, "--method",
              "laplace", "--epsilon", "1", "--seed", "1"});
  EXPECT_EQ(o.code, kExitUsage);

  o = invoke({"anonymize", "--input", input, "--output", input, "--method",
              "idp-cbls", "--epsilon", "1", "--k", "3", "--seed", "1",
              "--label-column", "class"});
  EXPECT_EQ(o.code, kExitUsage) << "output must not overwrite input";

  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"bogus"}).code, kExitUsage);
  EXPECT_FALSE(std::filesystem::exists(output));
}

TEST(CliAnonymizeTest, DataErrorsExitThree) {
  TempDir dir;
  const std::string bad = dir.write("bad.csv", "a,b\n1,2\n3,oops\n");
  const std::string output = dir.file("out.csv");
  Outcome o = invoke({"anonymize", "--input", bad, "--output", output,
                      "--method", "idp-cbls", "--epsilon", "1", "--k", "3",
                      "--seed", "1"});
  EXPECT_EQ(o.code, kExitData);
  EXPECT_NE(o.err.find("oops"), std::string::npos) << o.err;

  o = invoke({"anonymize", "--input", dir.file("missing.csv"), "--output",
              output, "--method", "idp-cbls", "--epsilon", "1", "--k", "3",
              "--seed", "1"});
  EXPECT_EQ(o.code, kExitData);

  const std::string small = dir.write("small.csv", "a\n1\n2\n5\n");
  o = invoke({"anonymize", "--input", small, "--output", output, "--method",
              "idp-ls", "--epsilon", "1", "--k", "3", "--domains", "0:4",
              "--seed", "1"});
  EXPECT_EQ(o.code, kExitData) << "value outside the supplied domain";
}

TEST(CliSseTest, ReportsSseOfAMasking) {
  TempDir dir;
  const std::string original = dir.write("o.csv", "a,b\n0,0\n1,1\n2,2\n");
  const std::string masked = dir.write("m.csv", "a,b\n0,0\n1,1\n3,2\n");
  // Variances are 1; the last record has distance 1/2, so SSE is 1/4.
  const Outcome o = invoke({"sse", "--original", original, "--masked", masked});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out, "sse,mean_sse\n0.25,0.08333333333333333\n");
}

TEST(CliSplitTest, WritesMaskedTrainAndOriginalTest) {
  TempDir dir;
  const std::string original = dir.write("o.csv", sample_csv());
  const std::string masked = dir.file("m.csv");
  ASSERT_EQ(invoke({"anonymize", "--input", original, "--output", masked,
                    "--method", "idp-cbls", "--epsilon", "1", "--k", "5",
                    "--seed", "3", "--label-column", "class"})
                .code,
            kExitOk);
  const std::string train = dir.file("train.csv");
  const std::string test = dir.file("test.csv");
  const Outcome o = invoke({"split", "--original", original, "--masked",
                            masked, "--train-output", train, "--test-output",
                            test, "--label-column", "class"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const LoadOptions options{.attributes = {}, .label_column = "class"};
  const Dataset train_set = load_csv(train, options);
  const Dataset test_set = load_csv(test, options);
  EXPECT_EQ(train_set.rows(), 26u);  // floor(0.66 * 40)
  EXPECT_EQ(test_set.rows(), 14u);
  const Dataset masked_set = load_csv(masked, options);
  const Dataset original_set = load_csv(original, options);
  EXPECT_EQ(train_set.value(3, 0), masked_set.value(3, 0));
  EXPECT_EQ(test_set.value(0, 1), original_set.value(26, 1));
  EXPECT_EQ(test_set.labels()->values[0], original_set.labels()->values[26]);

  EXPECT_EQ(invoke({"split", "--original", original, "--masked", masked,
                    "--train-output", train, "--test-output", test,
                    "--fraction", "1.5"})
                .code,
            kExitUsage);
}

TEST(CliDeriveClassTest, ThresholdsAnAttributeIntoLabels) {
  TempDir dir;
  const std::string input =
      dir.write("in.csv", "ERNVAL,AGE\n25000,30\n30000,40\n45000,50\n");
  const std::string output = dir.file("out.csv");
  const Outcome o =
      invoke({"derive-class", "--input", input, "--output", output,
              "--attribute", "ERNVAL", "--threshold", "30000"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(read_file(output), "AGE,class\n30,low\n40,low\n50,high\n");
}

TEST(CliSensitivityReportTest, EmitsOneRowPerCluster) {
  TempDir dir;
  const std::string input = dir.write("in.csv", "x\n2\n3\n5\n8\n9\n10\n");
  const Outcome o = invoke({"sensitivity-report", "--input", input, "--k", "3",
                            "--kind", "cbls"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out,
            "attribute,cluster_index,kind,size,sensitivity\n"
            "x,0,cluster_based_local,3,2\n"
            "x,1,cluster_based_local,3,1\n");
  EXPECT_EQ(invoke({"sensitivity-report", "--input", input, "--k", "3",
                    "--kind", "local"})
                .code,
            kExitUsage);
}

class CliExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_.write("data.csv", sample_csv());
  }

  std::string write_config(const std::string& ks) {
    return dir_.write(
        "grid.json",
        R"({"schema_version": 1, "dataset": "data.csv",
            "attributes": ["income", "age"],
            "methods": ["dp", "dp-um", "idp-ls", "idp-cbls"],
            "epsilons": [0.1, 1.0], "alphas": [1.5], "ks": )" +
            ks + R"(, "repetitions": 3, "seed": 11,
            "results": "results.csv"})");
  }

  TempDir dir_;
};

TEST_F(CliExperimentTest, WritesResultsAndAveragesDeterministically) {
  const std::string config = write_config(R"({"from": 3, "to": 7, "step": 2})");
  const Outcome first = invoke({"experiment", "--config", config});
  ASSERT_EQ(first.code, kExitOk) << first.err;
  const std::string results = read_file(dir_.file("results.csv"));
  const std::string averages = read_file(dir_.file("results_averages.csv"));
  // 2 epsilons x (dp + 3 methods x 3 ks) cells x 3 repetitions.
  EXPECT_EQ(std::count(results.begin(), results.end(), '\n'), 1 + 2 * 10 * 3);
  EXPECT_EQ(std::count(averages.begin(), averages.end(), '\n'), 1 + 2 * 10);

  const Outcome second =
      invoke({"experiment", "--config", config, "--threads", "3"});
  ASSERT_EQ(second.code, kExitOk) << second.err;
  EXPECT_EQ(read_file(dir_.file("results.csv")), results);
  EXPECT_EQ(read_file(dir_.file("data.csv")), sample_csv());
}

TEST_F(CliExperimentTest, RelativeConfigPathResolvesOutputsOnce) {
  write_config("[3]");
  std::filesystem::create_directories(dir_.file("out"));
  const std::filesystem::path cwd = std::filesystem::current_path();
  std::filesystem::current_path(dir_.file("out"));
  const Outcome o = invoke({"experiment", "--config", "../grid.json"});
  std::filesystem::current_path(cwd);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(std::filesystem::exists(dir_.file("results.csv")));
  EXPECT_TRUE(std::filesystem::exists(dir_.file("results_averages.csv")));
}

TEST_F(CliExperimentTest, InvalidConfigsExitTwo) {
  EXPECT_EQ(invoke({"experiment", "--config", write_config("[]")}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"experiment", "--config", dir_.write("x.json", "{")}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"experiment", "--config",
                    dir_.write("y.json", R"({"schema_version": 1,
                        "dataset": "data.csv", "methods": ["dp"],
                        "epsilons": [1], "alphas": [1.5],
                        "results": "r.csv"})")})
                .code,
            kExitUsage)
      << "seed is mandatory";
}

TEST_F(CliExperimentTest, SkippedCellsWarnButSucceed) {
  const Outcome o = invoke({"experiment", "--config", write_config("[2, 4]")});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.err.find("skipping idp-cbls with k = 2"), std::string::npos)
      << o.err;
}

}  // namespace
}  // namespace idpm::cli
