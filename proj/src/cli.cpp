// Copyright 2026 The diffrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "diffrl/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "diffrl/error.hpp"
#include "diffrl/plot_data.hpp"
#include "diffrl/report.hpp"
#include "diffrl/synthetic.hpp"
#include "diffrl/trial_data.hpp"
#include "text_io.hpp"

namespace diffrl {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return detail::read_all(in);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

/// "a,b,c" or "start:stop:step" (inclusive of stop).
std::vector<double> parse_tau_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ':')) {
      const auto v = detail::parse_real(detail::trim(item));
      if (!v) throw Error("bad tau grid '" + text + "'");
      parts.push_back(*v);
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw Error("tau range must be start:stop:step with step > 0 and stop >= start");
    }
    const auto steps = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long i = 0; i <= steps; ++i) grid.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return grid;
  }
  for (const auto field : detail::split_fields(text)) {
    const auto v = detail::parse_real(field);
    if (!v) throw Error("bad tau value '" + std::string(field) + "'");
    grid.push_back(*v);
  }
  return grid;
}

std::vector<std::string> parse_names(const std::string& text) {
  std::vector<std::string> names;
  for (const auto field : detail::split_fields(text)) {
    if (!field.empty()) names.emplace_back(field);
  }
  return names;
}

/// Keys mirror the long flag names with underscores.
void apply_config_file(const std::string& path, AnalysisConfig& config) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw Error("config file " + path + ": expected an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "resamples") {
        config.resamples = value.get<std::size_t>();
      } else if (key == "confidence") {
        config.confidence = value.get<double>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "tau_grid") {
        config.tau_grid = value.is_string() ? parse_tau_grid(value.get<std::string>())
                                            : value.get<std::vector<double>>();
      } else if (key == "alpha") {
        config.alpha = value.get<double>();
      } else if (key == "meaningful_threshold") {
        config.meaningful_threshold = value.get<double>();
      } else if (key == "implementations") {
        config.implementations = value.get<std::vector<std::string>>();
      } else {
        throw Error("config file " + path + ": unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("config file " + path + ": " + e.what());
  }
}

struct AnalysisFlags {
  std::string trials;
  std::string baselines;
  std::string config_file;
  std::size_t resamples = 0;
  double confidence = 0.0;
  std::uint64_t seed = 0;
  std::string tau_grid;
  double alpha = 0.0;
  double meaningful_threshold = 0.0;
  std::string implementations;
  std::string format = "json";
  std::string out;
  bool serial = false;

  CLI::Option* resamples_opt = nullptr;
  CLI::Option* confidence_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* tau_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* meaningful_opt = nullptr;
  CLI::Option* implementations_opt = nullptr;

  void attach(CLI::App& app, bool need_baselines, bool with_format) {
    app.add_option("--trials", trials, "Trial log (CSV)")->required();
    auto* b = app.add_option("--baselines", baselines, "Baseline table (CSV)");
    if (need_baselines) b->required();
    app.add_option("--config", config_file, "JSON config file; flags override it");
    resamples_opt = app.add_option("--resamples", resamples, "Bootstrap resamples [2000]");
    confidence_opt = app.add_option("--confidence", confidence, "CI confidence level [0.95]");
    seed_opt = app.add_option("--seed", seed, "Master seed [0]");
    tau_opt = app.add_option("--tau-grid", tau_grid,
                             "Profile thresholds: 'a,b,c' or 'start:stop:step' [0:2:0.05]");
    alpha_opt = app.add_option("--alpha", alpha, "ANOVA significance level [0.05]");
    meaningful_opt = app.add_option("--meaningful-threshold", meaningful_threshold,
                                    "POI CI upper bound needed for meaningfulness [0.75]");
    implementations_opt = app.add_option("--implementations", implementations,
                                         "Comma-separated subset of implementations");
    if (with_format) {
      app.add_option("--format", format, "Report format")
          ->check(CLI::IsMember({"json", "text"}));
      app.add_option("--out", out, "Write the report here instead of stdout");
    }
    app.add_flag("--serial", serial, "Run bootstrap kernels without OpenMP");
  }

  AnalysisConfig resolve() const {
    AnalysisConfig config;
    if (!config_file.empty()) apply_config_file(config_file, config);
    if (resamples_opt->count()) config.resamples = resamples;
    if (confidence_opt->count()) config.confidence = confidence;
    if (seed_opt->count()) config.seed = seed;
    if (tau_opt->count()) config.tau_grid = parse_tau_grid(tau_grid);
    if (alpha_opt->count()) config.alpha = alpha;
    if (meaningful_opt->count()) config.meaningful_threshold = meaningful_threshold;
    if (implementations_opt->count()) config.implementations = parse_names(implementations);
    config.execution = serial ? Execution::serial : Execution::parallel;
    validate(config);
    return config;
  }
};

struct LoadedInputs {
  TrialDataset dataset;
  BaselineTable baselines;
  InputDigests digests;
};

LoadedInputs load_inputs(const AnalysisFlags& flags) {
  LoadedInputs loaded;
  const auto trials_text = read_file(flags.trials);
  try {
    loaded.dataset = parse_trial_log(trials_text);
  } catch (const ParseError& e) {
    throw Error(flags.trials + ": " + e.what());
  }
  loaded.digests.trials = content_digest(trials_text);
  if (!flags.baselines.empty()) {
    const auto baselines_text = read_file(flags.baselines);
    try {
      loaded.baselines = load_baseline_table(baselines_text);
    } catch (const ParseError& e) {
      throw Error(flags.baselines + ": " + e.what());
    }
    loaded.digests.baselines = content_digest(baselines_text);
  }
  return loaded;
}

void emit(const ComparisonReport& report, const AnalysisFlags& flags, std::ostream& out) {
  const auto text = flags.format == "text" ? render_text(report) : render_json(report);
  if (flags.out.empty()) {
    out << text;
  } else {
    write_file(flags.out, text);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Statistical differential testing of stochastic implementations", "diffrl");
  app.require_subcommand(1);

  AnalysisFlags compare_flags, profile_flags, poi_flags, anova_flags, plot_flags;
  auto* compare = app.add_subcommand(
      "compare", "Full comparison: ANOVA, profiles, aggregates, pairwise POI, verdict");
  compare_flags.attach(*compare, true, true);
  auto* profile = app.add_subcommand("profile", "Performance profiles with SBCI bands");
  profile_flags.attach(*profile, true, true);
  auto* poi = app.add_subcommand("poi", "Pairwise probability of improvement with verdicts");
  poi_flags.attach(*poi, true, true);
  auto* anova = app.add_subcommand("anova", "Per-environment one-way ANOVA on MeanReward100");
  anova_flags.attach(*anova, false, true);
  auto* plot = app.add_subcommand("plot-data", "Write plot-ready CSV tables");
  plot_flags.attach(*plot, true, false);
  std::string plot_dir;
  plot->add_option("--out-dir", plot_dir, "Directory for curves/profile/poi tables")->required();

  auto* synth = app.add_subcommand("synth", "Generate trial logs from a synthetic spec");
  std::string spec_path;
  std::string synth_out;
  std::uint64_t synth_seed = 0;
  synth->add_option("--spec", spec_path, "Synthetic spec (JSON)")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Master seed [0]");

  std::vector<const char*> argv = {"diffrl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (compare->parsed()) {
      const auto config = compare_flags.resolve();
      auto inputs = load_inputs(compare_flags);
      emit(run_compare(inputs.dataset, inputs.baselines, config, inputs.digests),
           compare_flags, out);
    } else if (profile->parsed()) {
      const auto config = profile_flags.resolve();
      auto inputs = load_inputs(profile_flags);
      emit(run_profile(inputs.dataset, inputs.baselines, config, inputs.digests),
           profile_flags, out);
    } else if (poi->parsed()) {
      const auto config = poi_flags.resolve();
      auto inputs = load_inputs(poi_flags);
      emit(run_poi(inputs.dataset, inputs.baselines, config, inputs.digests), poi_flags, out);
    } else if (anova->parsed()) {
      const auto config = anova_flags.resolve();
      auto inputs = load_inputs(anova_flags);
      emit(run_anova(inputs.dataset, config, inputs.digests), anova_flags, out);
    } else if (plot->parsed()) {
      const auto config = plot_flags.resolve();
      auto inputs = load_inputs(plot_flags);
      const auto report = run_compare(inputs.dataset, inputs.baselines, config, inputs.digests);
      for (const auto& path : emit_plot_data(report, inputs.dataset, plot_dir)) {
        out << path.string() << '\n';
      }
    } else if (synth->parsed()) {
      const auto suite = parse_synthetic_spec(read_file(spec_path));
      const auto dataset = generate_synthetic_trials(suite.implementations, synth_seed);
      fs::create_directories(synth_out);
      const fs::path dir(synth_out);
      write_file(dir / "trials.csv", serialize_trial_log(dataset));
      out << (dir / "trials.csv").string() << '\n';
      write_file(dir / "truth.json", synthetic_truth_json(suite));
      out << (dir / "truth.json").string() << '\n';
      if (!suite.baselines.empty()) {
        write_file(dir / "baselines.csv", serialize_baseline_table(suite.baselines));
        out << (dir / "baselines.csv").string() << '\n';
      }
    }
  } catch (const std::exception& e) {
    err << "diffrl: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace diffrl
