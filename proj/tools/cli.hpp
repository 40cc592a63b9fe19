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

// Command-line front end. Exit codes: 0 success, 2 usage or validation
// error, 3 data or runtime error.

#ifndef IDPM_TOOLS_CLI_HPP_
#define IDPM_TOOLS_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "idpm/idpm.hpp"
#include "json.hpp"

namespace idpm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

// Raised for flag combinations that are rejected before any computation.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace internal {

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    out.emplace_back(csv::trim(item));
  }
  return out;
}

inline double to_number(const std::string& text, const std::string& what) {
  double value = 0.0;
  if (!csv::parse_double(text, value)) {
    throw UsageError("invalid " + what + ": '" + text + "'");
  }
  return value;
}

// "lo:hi,lo:hi,..." in attribute order.
inline std::vector<std::pair<double, double>> parse_domains(
    const std::string& text) {
  std::vector<std::pair<double, double>> out;
  for (const std::string& item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw UsageError("domain '" + item + "' is not of the form lo:hi");
    }
    out.emplace_back(to_number(item.substr(0, colon), "domain bound"),
                     to_number(item.substr(colon + 1), "domain bound"));
  }
  return out;
}

inline std::vector<double> parse_numbers(const std::string& text,
                                         const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) {
    out.push_back(to_number(item, what));
  }
  return out;
}

inline Method parse_method_or_throw(const std::string& name) {
  const auto method = parse_method(name);
  if (!method) {
    throw UsageError("unknown method '" + name +
                     "' (expected dp, dp-um, idp-ls or idp-cbls)");
  }
  return *method;
}

inline bool same_file(const std::string& a, const std::string& b) {
  std::error_code ec;
  if (std::filesystem::exists(a, ec) && std::filesystem::exists(b, ec)) {
    return std::filesystem::equivalent(a, b, ec);
  }
  return std::filesystem::weakly_canonical(a, ec) ==
         std::filesystem::weakly_canonical(b, ec);
}

inline void refuse_overwrite(const std::string& input,
                             const std::string& output) {
  if (same_file(input, output)) {
    throw UsageError("output '" + output + "' would overwrite input '" +
                     input + "'");
  }
}

inline LoadOptions load_options(const std::string& attributes,
                                const std::string& label_column) {
  LoadOptions options;
  options.attributes = split_list(attributes);
  if (!label_column.empty()) options.label_column = label_column;
  return options;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo,
          "cannot write '" + path + "'");
  out << text;
  require(static_cast<bool>(out), ErrorCode::kIo,
          "write failed for '" + path + "'");
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  write_text(path, buffer.str());
}

}  // namespace internal

// ---------------------------------------------------------------------------
// anonymize
// ---------------------------------------------------------------------------

struct AnonymizeFlags {
  std::string input;
  std::string output;
  std::string manifest;
  std::string method;
  double epsilon = 0.0;
  std::optional<std::size_t> k;
  std::optional<double> alpha;
  std::string domains;
  std::optional<std::uint64_t> seed;
  std::string attributes;
  std::string label_column;
  std::string clamp;  // "", "on" or "off"
  std::string weights;
  std::string cluster_dump;
  unsigned threads = default_thread_count();
};

inline MechanismConfig validate_anonymize(const AnonymizeFlags& flags) {
  MechanismConfig config;
  config.method = internal::parse_method_or_throw(flags.method);
  if (!(flags.epsilon > 0.0)) throw UsageError("epsilon must be positive");
  config.epsilon = flags.epsilon;
  if (!flags.seed) throw UsageError("--seed is required");
  config.seed = *flags.seed;
  if (method_microaggregates(config.method)) {
    if (!flags.k) {
      throw UsageError("--k is required for " +
                       std::string(method_name(config.method)));
    }
    if (config.method == Method::kIdpCbls && *flags.k < 3) {
      throw UsageError("k must be ≥ 3 for idp-cbls");
    }
    if (*flags.k < 1) throw UsageError("k must be ≥ 1");
    config.k = *flags.k;
  }
  if (flags.alpha && !flags.domains.empty()) {
    throw UsageError("give either --alpha or --domains, not both");
  }
  if (flags.alpha) {
    if (!(*flags.alpha > 0.0)) throw UsageError("alpha must be positive");
    config.alpha = flags.alpha;
  }
  config.domains = internal::parse_domains(flags.domains);
  if (method_needs_domains(config.method) && !config.alpha &&
      config.domains.empty()) {
    throw UsageError(std::string(method_name(config.method)) +
                     " needs bounded domains: pass --alpha or --domains");
  }
  if (flags.clamp == "on") {
    config.clamp = true;
  } else if (flags.clamp == "off") {
    config.clamp = false;
  } else if (!flags.clamp.empty()) {
    throw UsageError("--clamp takes 'on' or 'off'");
  }
  config.weights = internal::parse_numbers(flags.weights, "weight");
  config.threads = flags.threads;
  internal::refuse_overwrite(flags.input, flags.output);
  return config;
}

inline int run_anonymize(const AnonymizeFlags& flags, std::ostream& out) {
  const MechanismConfig config = validate_anonymize(flags);
  const Dataset original = load_csv(
      flags.input, internal::load_options(flags.attributes, flags.label_column));
  const MaskResult result = anonymize(original, config);
  save_csv(flags.output, result.masked);

  const std::string manifest_path =
      flags.manifest.empty() ? flags.output + ".manifest.json" : flags.manifest;
  const auto domains = resolve_domains(original, config);
  internal::write_text(
      manifest_path,
      build_manifest(config, result, domains, flags.input, flags.output)
              .dump(2) +
          "\n");
  if (!flags.cluster_dump.empty()) {
    internal::write_file(flags.cluster_dump, [&](std::ostream& s) {
      write_cluster_dump(s, result.clusterings, original);
    });
  }
  out << "wrote " << flags.output << " (" << result.masked.rows() << " x "
      << result.masked.cols() << ") and " << manifest_path << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sse
// ---------------------------------------------------------------------------

struct SseFlags {
  std::string original;
  std::string masked;
  std::string attributes;
  std::string label_column;
  std::string normalization = "variance";
  std::string output;
};

inline int run_sse(const SseFlags& flags, std::ostream& out,
                   std::ostream& err) {
  DistanceNormalization normalization;
  if (flags.normalization == "variance") {
    normalization = DistanceNormalization::kVariance;
  } else if (flags.normalization == "stddev") {
    normalization = DistanceNormalization::kStandardDeviation;
  } else {
    throw UsageError("--normalization takes 'variance' or 'stddev'");
  }
  const Dataset original = load_csv(
      flags.original,
      internal::load_options(flags.attributes, flags.label_column));
  LoadOptions masked_options;
  masked_options.attributes = original.attributes();
  const Dataset masked = load_csv(flags.masked, masked_options);
  const SseResult result =
      sse(original, masked, column_stats(original), normalization);
  for (const std::string& name : result.excluded_attributes) {
    err << "warning: attribute '" << name
        << "' has zero variance and is left out of SSE\n";
  }
  std::ostringstream text;
  text << "sse,mean_sse\n"
       << csv::format_double(result.sse) << ','
       << csv::format_double(result.mean_sse) << '\n';
  if (flags.output.empty()) {
    out << text.str();
  } else {
    internal::write_text(flags.output, text.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// split / derive-class
// ---------------------------------------------------------------------------

struct SplitFlags {
  std::string original;
  std::string masked;
  double fraction = 0.66;
  std::string train_output;
  std::string test_output;
  std::string attributes;
  std::string label_column;
};

inline int run_split(const SplitFlags& flags, std::ostream& out) {
  if (!(flags.fraction > 0.0 && flags.fraction < 1.0)) {
    throw UsageError("--fraction must lie strictly between 0 and 1");
  }
  for (const std::string* input : {&flags.original, &flags.masked}) {
    internal::refuse_overwrite(*input, flags.train_output);
    internal::refuse_overwrite(*input, flags.test_output);
  }
  const LoadOptions options =
      internal::load_options(flags.attributes, flags.label_column);
  const Dataset original = load_csv(flags.original, options);
  LoadOptions masked_options;
  masked_options.attributes = original.attributes();
  // The masked file carries the label column when it was anonymized from a
  // labeled dataset; otherwise the original's labels are used.
  if (options.label_column) {
    std::ifstream probe(flags.masked);
    std::string header;
    std::getline(probe, header);
    for (const std::string& name : internal::split_list(header)) {
      if (name == *options.label_column) {
        masked_options.label_column = options.label_column;
      }
    }
  }
  const Dataset masked = load_csv(flags.masked, masked_options);
  const TrainTestSplit split =
      split_train_test(original, masked, flags.fraction);
  save_csv(flags.train_output, split.train);
  save_csv(flags.test_output, split.test);
  out << "train " << split.train.rows() << " rows -> " << flags.train_output
      << ", test " << split.test.rows() << " rows -> " << flags.test_output
      << '\n';
  return kExitOk;
}

struct DeriveClassFlags {
  std::string input;
  std::string output;
  std::string attribute;
  double threshold = 0.0;
  std::string label_name = "class";
  std::string attributes;
};

inline int run_derive_class(const DeriveClassFlags& flags, std::ostream& out) {
  internal::refuse_overwrite(flags.input, flags.output);
  const Dataset d =
      load_csv(flags.input, internal::load_options(flags.attributes, ""));
  const Dataset labeled =
      derive_class(d, flags.attribute, flags.threshold, flags.label_name);
  save_csv(flags.output, labeled);
  std::size_t low = 0;
  for (const std::string& label : labeled.labels()->values) {
    low += label == kLowLabel;
  }
  out << "wrote " << flags.output << ": " << low << " low, "
      << labeled.rows() - low << " high\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sensitivity-report
// ---------------------------------------------------------------------------

struct SensitivityFlags {
  std::string input;
  std::string output;
  std::optional<std::size_t> k;
  std::string kind = "all";
  std::optional<double> alpha;
  std::string domains;
  std::string attributes;
  std::string label_column;
};

inline int run_sensitivity_report(const SensitivityFlags& flags,
                                  std::ostream& out) {
  if (!flags.k || *flags.k < 1) throw UsageError("--k must be at least 1");
  std::vector<SensitivityKind> kinds;
  if (flags.kind == "global" || flags.kind == "all") {
    kinds.push_back(SensitivityKind::kGlobal);
  }
  if (flags.kind == "local" || flags.kind == "all") {
    kinds.push_back(SensitivityKind::kLocal);
  }
  if (flags.kind == "cbls" || flags.kind == "all") {
    kinds.push_back(SensitivityKind::kClusterBasedLocal);
  }
  if (kinds.empty()) {
    throw UsageError("--kind takes global, local, cbls or all");
  }
  const bool needs_domains = flags.kind != "cbls";
  if (flags.alpha && !flags.domains.empty()) {
    throw UsageError("give either --alpha or --domains, not both");
  }
  if (needs_domains && !flags.alpha && flags.domains.empty()) {
    throw UsageError("global and local sensitivities need --alpha or --domains");
  }
  if (flags.alpha && !(*flags.alpha > 0.0)) {
    throw UsageError("alpha must be positive");
  }
  if (*flags.k < 3 && flags.kind != "global" && flags.kind != "local") {
    throw UsageError("k must be ≥ 3 for cluster-based sensitivity");
  }
  const auto bounds = internal::parse_domains(flags.domains);
  if (!flags.output.empty()) internal::refuse_overwrite(flags.input, flags.output);

  const Dataset d = load_csv(
      flags.input, internal::load_options(flags.attributes, flags.label_column));
  std::vector<AttributeDomain> domains;
  if (flags.alpha) {
    domains = compute_domains(d, *flags.alpha);
  } else if (!bounds.empty()) {
    domains = explicit_domains(d, bounds);
  }
  std::vector<SensitivityProfile> profiles;
  for (std::size_t a = 0; a < d.cols(); ++a) {
    const Clustering clustering =
        individual_ranking_cluster(d.column(a), *flags.k, d.attributes()[a]);
    for (SensitivityKind kind : kinds) {
      profiles.push_back(compute_profile(kind, clustering, d.column(a),
                                         domains.empty() ? nullptr
                                                         : &domains[a]));
    }
  }
  if (flags.output.empty()) {
    write_sensitivity_report(out, profiles);
  } else {
    internal::write_file(flags.output, [&](std::ostream& s) {
      write_sensitivity_report(s, profiles);
    });
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string dataset;
  std::vector<std::string> attributes;
  ExperimentGrid grid;
  DistanceNormalization normalization = DistanceNormalization::kVariance;
  bool clamp = true;
  std::string results;
  std::string averages;
};

// Relative paths resolve against the directory holding the config file.
inline ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
  }
  const std::filesystem::path base =
      std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path candidate(p);
    return (candidate.is_absolute() ? candidate : base / candidate).string();
  };

  ExperimentConfig config;
  try {
    const int schema = json.at("schema_version").get<int>();
    if (schema != kSchemaVersion) {
      throw UsageError("unsupported schema_version " + std::to_string(schema));
    }
    config.dataset = resolve(json.at("dataset").get<std::string>());
    if (json.contains("attributes")) {
      config.attributes = json.at("attributes").get<std::vector<std::string>>();
    }
    for (const auto& name : json.at("methods")) {
      config.grid.methods.push_back(
          internal::parse_method_or_throw(name.get<std::string>()));
    }
    config.grid.epsilons = json.at("epsilons").get<std::vector<double>>();
    config.grid.alphas = json.at("alphas").get<std::vector<double>>();
    if (json.contains("ks")) {
      const auto& ks = json.at("ks");
      if (ks.is_object()) {
        const std::size_t from = ks.at("from").get<std::size_t>();
        const std::size_t to = ks.at("to").get<std::size_t>();
        const std::size_t step = ks.value("step", std::size_t{1});
        if (step == 0) throw UsageError("ks.step must be positive");
        for (std::size_t k = from; k <= to; k += step) {
          config.grid.ks.push_back(k);
        }
      } else {
        config.grid.ks = ks.get<std::vector<std::size_t>>();
      }
    }
    config.grid.repetitions = json.value("repetitions", std::size_t{10});
    if (!json.contains("seed")) {
      throw UsageError("config needs a 'seed'");
    }
    config.grid.base_seed = json.at("seed").get<std::uint64_t>();
    const std::string normalization = json.value("normalization", "variance");
    if (normalization == "stddev") {
      config.normalization = DistanceNormalization::kStandardDeviation;
    } else if (normalization != "variance") {
      throw UsageError("normalization must be 'variance' or 'stddev'");
    }
    config.clamp = json.value("clamp", true);
    const std::string results = json.at("results").get<std::string>();
    config.results = resolve(results);
    config.averages = resolve(json.value(
        "averages",
        std::filesystem::path(results).replace_extension().string() +
            "_averages.csv"));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  try {
    validate(config.grid);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  internal::refuse_overwrite(config.dataset, config.results);
  internal::refuse_overwrite(config.dataset, config.averages);
  return config;
}

inline int run_experiment_command(const std::string& config_path,
                                  unsigned threads, std::ostream& out,
                                  std::ostream& err) {
  const ExperimentConfig config = parse_experiment_config(config_path);
  LoadOptions options;
  options.attributes = config.attributes;
  const Dataset d = load_csv(config.dataset, options);
  ExperimentOptions run_options;
  run_options.threads = threads;
  run_options.normalization = config.normalization;
  run_options.clamp = config.clamp;
  const ExperimentReport report = run_experiment(config.grid, d, run_options);
  for (const std::string& warning : report.warnings) {
    err << "warning: " << warning << '\n';
  }
  internal::write_file(config.results, [&](std::ostream& s) {
    write_results_csv(s, report.results);
  });
  internal::write_file(config.averages, [&](std::ostream& s) {
    write_averages_csv(s, report.averages);
  });
  out << "wrote " << report.results.size() << " runs to " << config.results
      << " and " << report.averages.size() << " cell averages to "
      << config.averages << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Differentially private and individually differentially "
               "private microdata via microaggregation",
               "idpm"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  AnonymizeFlags anonymize_flags;
  auto* anonymize_cmd =
      app.add_subcommand("anonymize", "Mask a numeric CSV dataset");
  anonymize_cmd->add_option("--input", anonymize_flags.input)->required();
  anonymize_cmd->add_option("--output", anonymize_flags.output)->required();
  anonymize_cmd->add_option("--manifest", anonymize_flags.manifest,
                            "Default: <output>.manifest.json");
  anonymize_cmd
      ->add_option("--method", anonymize_flags.method,
                   "dp, dp-um, idp-ls or idp-cbls")
      ->required();
  anonymize_cmd->add_option("--epsilon", anonymize_flags.epsilon)->required();
  anonymize_cmd->add_option("--k", anonymize_flags.k);
  anonymize_cmd->add_option("--alpha", anonymize_flags.alpha,
                            "Domains [0, alpha * column max]");
  anonymize_cmd->add_option("--domains", anonymize_flags.domains,
                            "Explicit domains lo:hi,... in attribute order");
  anonymize_cmd->add_option("--seed", anonymize_flags.seed)->required();
  anonymize_cmd->add_option("--attributes", anonymize_flags.attributes,
                            "Comma-separated attribute selection");
  anonymize_cmd->add_option("--label-column", anonymize_flags.label_column,
                            "String column passed through unchanged");
  anonymize_cmd->add_option("--clamp", anonymize_flags.clamp, "on or off");
  anonymize_cmd->add_option("--weights", anonymize_flags.weights,
                            "Per-attribute budget weights");
  anonymize_cmd->add_option("--cluster-dump", anonymize_flags.cluster_dump);
  anonymize_cmd->add_option("--threads", anonymize_flags.threads);

  SseFlags sse_flags;
  auto* sse_cmd = app.add_subcommand("sse", "Information loss of a masking");
  sse_cmd->add_option("--original", sse_flags.original)->required();
  sse_cmd->add_option("--masked", sse_flags.masked)->required();
  sse_cmd->add_option("--attributes", sse_flags.attributes);
  sse_cmd->add_option("--label-column", sse_flags.label_column);
  sse_cmd->add_option("--normalization", sse_flags.normalization,
                      "variance (default) or stddev");
  sse_cmd->add_option("--output", sse_flags.output);

  SplitFlags split_flags;
  auto* split_cmd = app.add_subcommand(
      "split", "Masked training rows and original test rows");
  split_cmd->add_option("--original", split_flags.original)->required();
  split_cmd->add_option("--masked", split_flags.masked)->required();
  split_cmd->add_option("--fraction", split_flags.fraction);
  split_cmd->add_option("--train-output", split_flags.train_output)
      ->required();
  split_cmd->add_option("--test-output", split_flags.test_output)->required();
  split_cmd->add_option("--attributes", split_flags.attributes);
  split_cmd->add_option("--label-column", split_flags.label_column);

  DeriveClassFlags derive_flags;
  auto* derive_cmd = app.add_subcommand(
      "derive-class", "Binary class column from a numeric threshold");
  derive_cmd->add_option("--input", derive_flags.input)->required();
  derive_cmd->add_option("--output", derive_flags.output)->required();
  derive_cmd->add_option("--attribute", derive_flags.attribute)->required();
  derive_cmd->add_option("--threshold", derive_flags.threshold)->required();
  derive_cmd->add_option("--label-name", derive_flags.label_name);
  derive_cmd->add_option("--attributes", derive_flags.attributes);

  std::string config_path;
  unsigned experiment_threads = default_thread_count();
  auto* experiment_cmd =
      app.add_subcommand("experiment", "Run an information-loss grid");
  experiment_cmd->add_option("--config", config_path)->required();
  experiment_cmd->add_option("--threads", experiment_threads);

  SensitivityFlags sensitivity_flags;
  auto* sensitivity_cmd = app.add_subcommand(
      "sensitivity-report", "Per-cluster centroid sensitivities");
  sensitivity_cmd->add_option("--input", sensitivity_flags.input)->required();
  sensitivity_cmd->add_option("--output", sensitivity_flags.output);
  sensitivity_cmd->add_option("--k", sensitivity_flags.k)->required();
  sensitivity_cmd->add_option("--kind", sensitivity_flags.kind,
                              "global, local, cbls or all");
  sensitivity_cmd->add_option("--alpha", sensitivity_flags.alpha);
  sensitivity_cmd->add_option("--domains", sensitivity_flags.domains);
  sensitivity_cmd->add_option("--attributes", sensitivity_flags.attributes);
  sensitivity_cmd->add_option("--label-column",
                              sensitivity_flags.label_column);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*anonymize_cmd) return run_anonymize(anonymize_flags, out);
    if (*sse_cmd) return run_sse(sse_flags, out, err);
    if (*split_cmd) return run_split(split_flags, out);
    if (*derive_cmd) return run_derive_class(derive_flags, out);
    if (*experiment_cmd) {
      return run_experiment_command(config_path, experiment_threads, out, err);
    }
    if (*sensitivity_cmd) {
      return run_sensitivity_report(sensitivity_flags, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace idpm::cli

#endif  // IDPM_TOOLS_CLI_HPP_
