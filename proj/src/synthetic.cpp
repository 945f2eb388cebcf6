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

#include "diffrl/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include <json.hpp>

#include "diffrl/error.hpp"
#include "diffrl/rng.hpp"
#include "diffrl/special_functions.hpp"

namespace diffrl {

namespace {

constexpr std::size_t kWindow = 100;
constexpr const char* kSpecSchema = "diffrl-synth/1";
constexpr const char* kTruthSchema = "diffrl-synth-truth/1";

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

struct Moments {
  double mu;
  double sigma;
};

Moments normal_moments(const RewardModel& model) {
  if (const auto* c = std::get_if<ConstantModel>(&model)) return {c->value, 0.0};
  if (const auto* n = std::get_if<NormalModel>(&model)) return {n->mu, n->sigma};
  throw Error("analytic POI needs normal or constant models, got " + model_name(model));
}

}  // namespace

double LearningCurveModel::mean_at(std::size_t episode) const {
  const double z = (static_cast<double>(episode) - ramp_midpoint) / ramp_width;
  return start + (plateau - start) / (1.0 + std::exp(-z));
}

std::string model_name(const RewardModel& model) {
  return std::visit(Overloaded{[](const ConstantModel&) { return "constant"; },
                               [](const UniformModel&) { return "uniform"; },
                               [](const NormalModel&) { return "normal"; },
                               [](const LearningCurveModel&) { return "learning_curve"; }},
                    model);
}

void validate(const RewardModel& model) {
  auto finite = [](std::initializer_list<double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  };
  std::visit(Overloaded{
                 [&](const ConstantModel& m) {
                   if (!finite({m.value})) throw Error("constant value must be finite");
                 },
                 [&](const UniformModel& m) {
                   if (!finite({m.lo, m.hi})) throw Error("uniform bounds must be finite");
                   if (m.hi < m.lo) throw Error("uniform needs hi >= lo");
                 },
                 [&](const NormalModel& m) {
                   if (!finite({m.mu, m.sigma})) throw Error("normal parameters must be finite");
                   if (m.sigma < 0.0) throw Error("normal needs sigma >= 0");
                 },
                 [&](const LearningCurveModel& m) {
                   if (!finite({m.start, m.plateau, m.ramp_midpoint, m.ramp_width,
                                m.noise_sigma})) {
                     throw Error("learning_curve parameters must be finite");
                   }
                   if (!(m.ramp_width > 0.0)) throw Error("learning_curve needs ramp_width > 0");
                   if (m.noise_sigma < 0.0) throw Error("learning_curve needs noise_sigma >= 0");
                 }},
             model);
}

// --- spec file -------------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void spec_error(const std::string& path, const std::string& what) {
  throw ParseError(0, "synthetic spec " + path + ": " + what);
}

const json& member(const json& object, const std::string& key, const std::string& path) {
  if (!object.is_object()) spec_error(path, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) spec_error(path, "missing key '" + key + "'");
  return *it;
}

double real_at(const json& object, const std::string& key, const std::string& path) {
  const auto& v = member(object, key, path);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    spec_error(path + "." + key, "expected a finite number");
  }
  return v.get<double>();
}

std::size_t count_at(const json& object, const std::string& key, const std::string& path) {
  const auto& v = member(object, key, path);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    spec_error(path + "." + key, "expected a positive integer");
  }
  return v.get<std::size_t>();
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const std::string& path) {
  for (const auto& [key, value] : object.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      spec_error(path, "unknown key '" + key + "'");
    }
  }
}

RewardModel parse_model(const json& node, const std::string& path) {
  const auto& kind_node = member(node, "model", path);
  if (!kind_node.is_string()) spec_error(path + ".model", "expected a string");
  const auto kind = kind_node.get<std::string>();

  RewardModel model;
  if (kind == "constant") {
    reject_unknown_keys(node, {"model", "value"}, path);
    model = ConstantModel{real_at(node, "value", path)};
  } else if (kind == "uniform") {
    reject_unknown_keys(node, {"model", "lo", "hi"}, path);
    model = UniformModel{real_at(node, "lo", path), real_at(node, "hi", path)};
  } else if (kind == "normal") {
    reject_unknown_keys(node, {"model", "mu", "sigma"}, path);
    model = NormalModel{real_at(node, "mu", path), real_at(node, "sigma", path)};
  } else if (kind == "learning_curve") {
    reject_unknown_keys(node,
                        {"model", "start", "plateau", "ramp_midpoint", "ramp_width",
                         "noise_sigma"},
                        path);
    model = LearningCurveModel{real_at(node, "start", path), real_at(node, "plateau", path),
                               real_at(node, "ramp_midpoint", path),
                               real_at(node, "ramp_width", path),
                               real_at(node, "noise_sigma", path)};
  } else {
    spec_error(path + ".model", "unknown model '" + kind + "'");
  }
  try {
    validate(model);
  } catch (const Error& e) {
    spec_error(path, e.what());
  }
  return model;
}

std::set<std::string> environment_set(const SyntheticImplSpec& spec) {
  std::set<std::string> out;
  for (const auto& [env, model] : spec.environments) out.insert(env);
  return out;
}

void check_common_environments(std::span<const SyntheticImplSpec> specs) {
  if (specs.empty()) throw Error("synthetic spec has no implementations");
  const auto reference = environment_set(specs.front());
  if (reference.empty()) {
    throw Error("implementation '" + specs.front().implementation + "' has no environments");
  }
  for (const auto& spec : specs) {
    if (environment_set(spec) != reference) {
      throw Error("inconsistent environment sets: implementation '" + spec.implementation +
                  "' differs from '" + specs.front().implementation + "'");
    }
  }
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

SyntheticSuite parse_synthetic_spec(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(0, "synthetic spec is not valid JSON at " +
                            line_column(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!root.is_object()) spec_error("$", "expected an object");
  reject_unknown_keys(root, {"schema", "baselines", "implementations"}, "$");
  if (root.contains("schema") && root["schema"] != kSpecSchema) {
    spec_error("$.schema", std::string("expected '") + kSpecSchema + "'");
  }

  SyntheticSuite suite;
  if (root.contains("baselines")) {
    const auto& baselines = root["baselines"];
    if (!baselines.is_object()) spec_error("$.baselines", "expected an object");
    for (const auto& [env, entry] : baselines.items()) {
      const auto path = "$.baselines." + env;
      reject_unknown_keys(entry, {"random_play", "human_play"}, path);
      suite.baselines.insert(
          {env, real_at(entry, "random_play", path), real_at(entry, "human_play", path)});
    }
  }

  const auto& impls = member(root, "implementations", "$");
  if (!impls.is_array() || impls.empty()) {
    spec_error("$.implementations", "expected a non-empty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < impls.size(); ++i) {
    const auto path = "$.implementations[" + std::to_string(i) + "]";
    const auto& node = impls[i];
    reject_unknown_keys(node, {"name", "episodes_per_trial", "trials", "environments"}, path);
    const auto& name = member(node, "name", path);
    if (!name.is_string() || name.get<std::string>().empty()) {
      spec_error(path + ".name", "expected a non-empty string");
    }
    SyntheticImplSpec spec;
    spec.implementation = name.get<std::string>();
    if (!names.insert(spec.implementation).second) {
      spec_error(path + ".name", "duplicate implementation '" + spec.implementation + "'");
    }
    spec.episodes_per_trial = count_at(node, "episodes_per_trial", path);
    spec.trials = count_at(node, "trials", path);
    const auto& envs = member(node, "environments", path);
    if (!envs.is_object() || envs.empty()) {
      spec_error(path + ".environments", "expected a non-empty object");
    }
    for (const auto& [env, model] : envs.items()) {
      spec.environments.emplace(env, parse_model(model, path + ".environments." + env));
    }
    suite.implementations.push_back(std::move(spec));
  }

  try {
    check_common_environments(suite.implementations);
  } catch (const Error& e) {
    spec_error("$.implementations", e.what());
  }
  if (!suite.baselines.empty()) {
    for (const auto& [env, model] : suite.implementations.front().environments) {
      if (!suite.baselines.find(env)) spec_error("$.baselines", "missing environment '" + env + "'");
    }
  }
  return suite;
}

// --- generation ------------------------------------------------------------

namespace {

double draw_reward(const RewardModel& model, std::size_t episode, CounterRng& rng) {
  return std::visit(
      Overloaded{[](const ConstantModel& m) { return m.value; },
                 [&](const UniformModel& m) {
                   return m.hi == m.lo ? m.lo : m.lo + (m.hi - m.lo) * rng.uniform();
                 },
                 [&](const NormalModel& m) { return m.mu + m.sigma * rng.normal(); },
                 [&](const LearningCurveModel& m) {
                   return m.mean_at(episode) + m.noise_sigma * rng.normal();
                 }},
      model);
}

}  // namespace

TrialDataset generate_synthetic_trials(std::span<const SyntheticImplSpec> specs,
                                       std::uint64_t master_seed, Execution execution) {
  check_common_environments(specs);

  struct Task {
    const SyntheticImplSpec* spec;
    const std::string* environment;
    const RewardModel* model;
    std::uint32_t trial;
  };
  std::vector<Task> tasks;
  for (const auto& spec : specs) {
    if (spec.trials < 1 || spec.episodes_per_trial < 1) {
      throw Error("implementation '" + spec.implementation +
                  "' needs at least one trial and one episode");
    }
    for (const auto& [env, model] : spec.environments) {
      validate(model);
      for (std::size_t t = 0; t < spec.trials; ++t) {
        tasks.push_back({&spec, &env, &model, static_cast<std::uint32_t>(t)});
      }
    }
  }

  std::vector<TrialRecord> records(tasks.size());
  auto run = [&](std::size_t i) {
    const auto& task = tasks[i];
    auto rng = CounterRng(master_seed,
                          fnv1a64("synth/" + task.spec->implementation + "/" + *task.environment),
                          task.trial);
    auto& record = records[i];
    record.implementation = task.spec->implementation;
    record.environment = *task.environment;
    record.trial_index = task.trial;
    record.episode_rewards.resize(task.spec->episodes_per_trial);
    for (std::size_t e = 0; e < record.episode_rewards.size(); ++e) {
      record.episode_rewards[e] = draw_reward(*task.model, e, rng);
    }
  };

  const auto n = static_cast<std::int64_t>(tasks.size());
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  } else {
    for (std::int64_t i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  }
  return TrialDataset(std::move(records));
}

double analytic_poi(const RewardModel& x, const RewardModel& y) {
  const auto mx = normal_moments(x);
  const auto my = normal_moments(y);
  const double spread = std::sqrt(mx.sigma * mx.sigma + my.sigma * my.sigma);
  if (spread == 0.0) {
    if (mx.mu > my.mu) return 1.0;
    if (mx.mu < my.mu) return 0.0;
    return 0.5;
  }
  return normal_cdf((mx.mu - my.mu) / spread);
}

RewardModel TrialScoreDistribution::as_model() const {
  if (sd == 0.0) return ConstantModel{mean};
  return NormalModel{mean, sd};
}

TrialScoreDistribution trial_score_distribution(const RewardModel& model,
                                                std::size_t episodes) {
  if (episodes < 1) throw Error("a trial needs at least one episode");
  const std::size_t used = std::min(kWindow, episodes);
  const double root = std::sqrt(static_cast<double>(used));
  return std::visit(
      Overloaded{[&](const ConstantModel& m) { return TrialScoreDistribution{m.value, 0.0, true}; },
                 [&](const UniformModel& m) {
                   const double sd = (m.hi - m.lo) / std::sqrt(12.0) / root;
                   return TrialScoreDistribution{(m.lo + m.hi) / 2.0, sd, sd == 0.0};
                 },
                 [&](const NormalModel& m) {
                   return TrialScoreDistribution{m.mu, m.sigma / root, true};
                 },
                 [&](const LearningCurveModel& m) {
                   double sum = 0.0;
                   for (std::size_t e = episodes - used; e < episodes; ++e) sum += m.mean_at(e);
                   return TrialScoreDistribution{sum / static_cast<double>(used),
                                                 m.noise_sigma / root, true};
                 }},
      model);
}

// --- truth sidecar ---------------------------------------------------------

namespace {

nlohmann::ordered_json model_json(const RewardModel& model) {
  nlohmann::ordered_json j;
  j["model"] = model_name(model);
  std::visit(Overloaded{[&](const ConstantModel& m) { j["value"] = m.value; },
                        [&](const UniformModel& m) {
                          j["lo"] = m.lo;
                          j["hi"] = m.hi;
                        },
                        [&](const NormalModel& m) {
                          j["mu"] = m.mu;
                          j["sigma"] = m.sigma;
                        },
                        [&](const LearningCurveModel& m) {
                          j["start"] = m.start;
                          j["plateau"] = m.plateau;
                          j["ramp_midpoint"] = m.ramp_midpoint;
                          j["ramp_width"] = m.ramp_width;
                          j["noise_sigma"] = m.noise_sigma;
                        }},
             model);
  return j;
}

// Trial-score distribution mapped through the environment's normalization.
TrialScoreDistribution normalized(const TrialScoreDistribution& raw,
                                  const BaselineEntry& baseline) {
  const double span = baseline.human_play - baseline.random_play;
  return {normalize_score(raw.mean, baseline).value, raw.sd / std::abs(span), raw.normal};
}

}  // namespace

std::string synthetic_truth_json(const SyntheticSuite& suite) {
  check_common_environments(suite.implementations);
  const bool has_baselines = !suite.baselines.empty();

  std::vector<std::string> environments;
  for (const auto& [env, model] : suite.implementations.front().environments) {
    environments.push_back(env);
  }

  // Distribution used for POI: normalized when baselines exist, since the
  // pipeline compares normalized scores and a reversed baseline flips order.
  auto poi_distribution = [&](const SyntheticImplSpec& spec, const std::string& env) {
    const auto raw =
        trial_score_distribution(spec.environments.find(env)->second, spec.episodes_per_trial);
    return has_baselines ? normalized(raw, suite.baselines.at(env)) : raw;
  };

  nlohmann::ordered_json root;
  root["schema"] = kTruthSchema;
  root["environments"] = environments;
  root["poi_space"] = has_baselines ? "normalized" : "raw";

  auto& impls = root["implementations"] = nlohmann::ordered_json::array();
  for (const auto& spec : suite.implementations) {
    nlohmann::ordered_json entry;
    entry["name"] = spec.implementation;
    entry["episodes_per_trial"] = spec.episodes_per_trial;
    entry["trials"] = spec.trials;
    double normalized_total = 0.0;
    for (const auto& env : environments) {
      const auto& model = spec.environments.find(env)->second;
      const auto raw = trial_score_distribution(model, spec.episodes_per_trial);
      nlohmann::ordered_json cell;
      cell["reward_model"] = model_json(model);
      cell["mean_reward_100"] = {{"mean", raw.mean}, {"sd", raw.sd}, {"normal", raw.normal}};
      if (has_baselines) {
        const auto norm = normalized(raw, suite.baselines.at(env));
        cell["normalized_score"] = {{"mean", norm.mean}, {"sd", norm.sd}};
        if (norm.normal) {
          cell["normalized_score"]["superhuman_probability"] =
              norm.sd == 0.0 ? (norm.mean > 1.0 ? 1.0 : 0.0)
                             : 1.0 - normal_cdf((1.0 - norm.mean) / norm.sd);
        }
        normalized_total += norm.mean;
      }
      entry["environments"][env] = std::move(cell);
    }
    if (has_baselines) {
      entry["normalized_score_mean"] = normalized_total / static_cast<double>(environments.size());
    }
    impls.push_back(std::move(entry));
  }

  auto& pairs = root["pairwise_poi"] = nlohmann::ordered_json::array();
  for (const auto& x : suite.implementations) {
    for (const auto& y : suite.implementations) {
      if (&x == &y) continue;
      nlohmann::ordered_json pair;
      pair["x"] = x.implementation;
      pair["y"] = y.implementation;
      bool closed_form = true;
      double total = 0.0;
      for (const auto& env : environments) {
        const auto dx = poi_distribution(x, env);
        const auto dy = poi_distribution(y, env);
        if (!dx.normal || !dy.normal) {
          closed_form = false;
          break;
        }
        const double p = analytic_poi(dx.as_model(), dy.as_model());
        pair["per_environment"][env] = p;
        total += p;
      }
      if (!closed_form) continue;
      pair["overall"] = total / static_cast<double>(environments.size());
      pairs.push_back(std::move(pair));
    }
  }
  return root.dump(2) + "\n";
}

}  // namespace diffrl
