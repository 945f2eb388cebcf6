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

#include "diffrl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "diffrl/error.hpp"
#include "diffrl/rng.hpp"

namespace diffrl {

using nlohmann::ordered_json;

void validate(const AnalysisConfig& config) {
  validate(config.bootstrap());
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
  if (!(config.meaningful_threshold >= 0.5 && config.meaningful_threshold < 1.0)) {
    throw Error("meaningful threshold must lie in [0.5, 1)");
  }
  if (config.tau_grid.empty()) throw Error("tau grid is empty");
  for (std::size_t i = 0; i < config.tau_grid.size(); ++i) {
    if (!std::isfinite(config.tau_grid[i])) throw Error("tau grid values must be finite");
    if (i > 0 && !(config.tau_grid[i] > config.tau_grid[i - 1])) {
      throw Error("tau grid must be strictly increasing");
    }
  }
}

std::string content_digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

VerdictSummary decide_verdict(const std::vector<PoiResult>& poi,
                              const std::vector<AnovaEntry>& anova) {
  VerdictSummary summary;
  for (const auto& p : poi) {
    if (p.better) summary.better_pairs.emplace_back(p.x_implementation, p.y_implementation);
  }
  for (const auto& a : anova) {
    if (a.result && a.result->reject) summary.rejecting_environments.push_back(a.environment);
  }
  const bool differs =
      !summary.better_pairs.empty() || !summary.rejecting_environments.empty();
  summary.verdict = differs ? Verdict::not_interchangeable : Verdict::interchangeable;
  return summary;
}

namespace {

TrialDataset restrict(const TrialDataset& dataset, const AnalysisConfig& config,
                      std::size_t minimum) {
  auto selected = config.implementations.empty() ? dataset
                                                 : dataset.select(config.implementations);
  if (selected.implementations().size() < minimum) {
    throw Error(minimum == 1 ? "need >= 1 implementation"
                             : "need >= " + std::to_string(minimum) + " implementations");
  }
  return selected;
}

// Reports every problematic environment at once instead of the first one.
void check_baselines(const TrialDataset& dataset, const BaselineTable& baselines) {
  std::vector<std::string> missing;
  std::vector<std::string> degenerate;
  for (const auto& env : dataset.environments()) {
    const auto* entry = baselines.find(env);
    if (!entry) {
      missing.push_back(env);
    } else if (entry->human_play == entry->random_play) {
      degenerate.push_back(env);
    }
  }
  auto join = [](const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
  };
  if (!missing.empty()) {
    if (missing.size() == 1) throw MissingBaselineError(missing.front());
    throw Error("no baseline for environments: " + join(missing));
  }
  if (!degenerate.empty()) {
    if (degenerate.size() == 1) throw DegenerateBaselineError(degenerate.front());
    throw Error("degenerate baselines (human_play equals random_play) for environments: " +
                join(degenerate));
  }
}

void check_complete(const ScoreMatrix& matrix) {
  for (const auto& name : matrix.implementations()) matrix.require_complete(name);
}

ComparisonReport base_report(std::string command, const TrialDataset& dataset,
                             const AnalysisConfig& config, InputDigests inputs) {
  ComparisonReport report;
  report.command = std::move(command);
  report.config = config;
  report.inputs = std::move(inputs);
  report.environments = dataset.environments();
  report.implementations = dataset.implementations();
  return report;
}

void fill_mean_rewards(ComparisonReport& report, const ScoreMatrix& raw) {
  for (std::size_t s = 0; s < raw.stratum_count(); ++s) {
    for (std::size_t i = 0; i < raw.implementation_count(); ++i) {
      const auto cell = raw.cell(s, i);
      if (cell.empty()) continue;
      MeanRewardCell out;
      out.environment = raw.strata()[s];
      out.implementation = raw.implementations()[i];
      out.trials = cell.size();
      out.mean_reward = aggregate(cell, AggregationMetric::mean());
      out.min_reward = *std::min_element(cell.begin(), cell.end());
      out.max_reward = *std::max_element(cell.begin(), cell.end());
      report.mean_rewards.push_back(std::move(out));
    }
  }
}

void fill_anova(ComparisonReport& report, const ScoreMatrix& raw, double alpha) {
  for (std::size_t s = 0; s < raw.stratum_count(); ++s) {
    AnovaEntry entry;
    entry.environment = raw.strata()[s];
    std::vector<std::vector<double>> groups;
    bool enough = true;
    for (std::size_t i = 0; i < raw.implementation_count(); ++i) {
      const auto cell = raw.cell(s, i);
      enough = enough && cell.size() >= 2;
      groups.emplace_back(cell.begin(), cell.end());
    }
    if (enough) entry.result = anova_oneway(groups, alpha, entry.environment);
    report.anova.push_back(std::move(entry));
  }
}

void fill_profile(ComparisonReport& report, const ScoreMatrix& scores,
                  const AnalysisConfig& config) {
  report.profile = performance_profile(scores, scores.implementations(), config.tau_grid,
                                       config.bootstrap());
}

void fill_aggregates(ComparisonReport& report, const ScoreMatrix& scores,
                     const AnalysisConfig& config) {
  const std::vector<AggregationMetric> metrics = {AggregationMetric::mean(),
                                                  AggregationMetric::interquartile_mean(),
                                                  AggregationMetric::optimality_gap()};
  for (const auto& name : scores.implementations()) {
    const auto estimates = sbci(scores, name, metrics, config.bootstrap());
    report.aggregates.push_back({name, estimates[0], estimates[1], estimates[2]});
  }
}

void fill_poi(ComparisonReport& report, const ScoreMatrix& scores,
              const AnalysisConfig& config) {
  for (const auto& x : scores.implementations()) {
    for (const auto& y : scores.implementations()) {
      if (x == y) continue;
      report.poi.push_back(
          poi_with_ci(scores, x, y, config.bootstrap(), config.meaningful_threshold));
    }
  }
}

}  // namespace

ComparisonReport run_compare(const TrialDataset& dataset, const BaselineTable& baselines,
                             const AnalysisConfig& config, InputDigests inputs) {
  validate(config);
  const auto data = restrict(dataset, config, 2);
  check_baselines(data, baselines);
  const auto scores = build_score_matrix(data, baselines);
  const auto raw = build_mean_reward_matrix(data);
  check_complete(scores);

  auto report = base_report("compare", data, config, std::move(inputs));
  fill_mean_rewards(report, raw);
  fill_anova(report, raw, config.alpha);
  fill_profile(report, scores, config);
  fill_aggregates(report, scores, config);
  fill_poi(report, scores, config);
  report.verdict = decide_verdict(report.poi, report.anova);
  return report;
}

ComparisonReport run_profile(const TrialDataset& dataset, const BaselineTable& baselines,
                             const AnalysisConfig& config, InputDigests inputs) {
  validate(config);
  const auto data = restrict(dataset, config, 1);
  check_baselines(data, baselines);
  const auto scores = build_score_matrix(data, baselines);
  check_complete(scores);

  auto report = base_report("profile", data, config, std::move(inputs));
  fill_profile(report, scores, config);
  return report;
}

ComparisonReport run_poi(const TrialDataset& dataset, const BaselineTable& baselines,
                         const AnalysisConfig& config, InputDigests inputs) {
  validate(config);
  const auto data = restrict(dataset, config, 2);
  check_baselines(data, baselines);
  const auto scores = build_score_matrix(data, baselines);
  check_complete(scores);

  auto report = base_report("poi", data, config, std::move(inputs));
  fill_poi(report, scores, config);
  return report;
}

ComparisonReport run_anova(const TrialDataset& dataset, const AnalysisConfig& config,
                           InputDigests inputs) {
  validate(config);
  const auto data = restrict(dataset, config, 2);
  const auto raw = build_mean_reward_matrix(data);

  auto report = base_report("anova", data, config, std::move(inputs));
  fill_mean_rewards(report, raw);
  fill_anova(report, raw, config.alpha);
  return report;
}

// --- rendering -------------------------------------------------------------

namespace {

ordered_json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json estimate_json(const EstimateWithCI& e) {
  return {{"point", number(e.point)},
          {"ci_lower", number(e.ci_lower)},
          {"ci_upper", number(e.ci_upper)}};
}

const char* verdict_name(Verdict v) {
  return v == Verdict::interchangeable ? "interchangeable" : "not_interchangeable";
}

}  // namespace

std::string render_json(const ComparisonReport& report) {
  ordered_json root;
  root["schema"] = kReportSchema;
  root["command"] = report.command;

  auto& meta = root["metadata"];
  meta["seed"] = report.config.seed;
  meta["resamples"] = report.config.resamples;
  meta["confidence"] = report.config.confidence;
  meta["ci_method"] = "percentile";
  meta["alpha"] = report.config.alpha;
  meta["significance_rule"] = "point > 0.5 and 0.5 outside CI";
  meta["meaningful_threshold"] = report.config.meaningful_threshold;
  meta["tau_grid"] = report.config.tau_grid;
  meta["implementation_filter"] = report.config.implementations;
  meta["inputs"] = {{"trials", report.inputs.trials}, {"baselines", report.inputs.baselines}};

  root["environments"] = report.environments;
  root["implementations"] = report.implementations;

  if (!report.mean_rewards.empty()) {
    auto& rows = root["mean_rewards"] = ordered_json::array();
    for (const auto& c : report.mean_rewards) {
      rows.push_back({{"environment", c.environment},
                      {"implementation", c.implementation},
                      {"trials", c.trials},
                      {"mean", number(c.mean_reward)},
                      {"min", number(c.min_reward)},
                      {"max", number(c.max_reward)}});
    }
  }

  if (!report.anova.empty()) {
    auto& rows = root["anova"] = ordered_json::array();
    for (const auto& a : report.anova) {
      ordered_json row = {{"environment", a.environment}};
      if (a.result) {
        row["status"] = "ok";
        row["f_statistic"] = number(a.result->f_statistic);
        row["p_value"] = number(a.result->p_value);
        row["reject"] = a.result->reject;
        row["df_between"] = a.result->df_between;
        row["df_within"] = a.result->df_within;
      } else {
        row["status"] = "insufficient_data";
        row["reject"] = false;
      }
      rows.push_back(std::move(row));
    }
  }

  if (report.profile) {
    auto& profile = root["profile"];
    profile["tau_grid"] = report.profile->tau_grid;
    auto& curves = profile["curves"] = ordered_json::object();
    for (std::size_t i = 0; i < report.profile->implementations.size(); ++i) {
      auto& curve = curves[report.profile->implementations[i]] = ordered_json::array();
      for (std::size_t t = 0; t < report.profile->tau_grid.size(); ++t) {
        auto point = estimate_json(report.profile->curves[i][t]);
        point["tau"] = report.profile->tau_grid[t];
        curve.push_back(std::move(point));
      }
    }
  }

  if (!report.aggregates.empty()) {
    auto& aggregates = root["aggregates"] = ordered_json::object();
    for (const auto& a : report.aggregates) {
      aggregates[a.implementation] = {{"mean", estimate_json(a.mean)},
                                      {"interquartile_mean", estimate_json(a.interquartile_mean)},
                                      {"optimality_gap", estimate_json(a.optimality_gap)}};
    }
  }

  if (!report.poi.empty()) {
    auto& rows = root["poi"] = ordered_json::array();
    for (const auto& p : report.poi) {
      auto row = ordered_json{{"x", p.x_implementation}, {"y", p.y_implementation}};
      row.update(estimate_json(p.estimate));
      row["significant"] = p.significant;
      row["meaningful"] = p.meaningful;
      row["better"] = p.better;
      rows.push_back(std::move(row));
    }
  }

  if (report.verdict) {
    auto& verdict = root["verdict"];
    verdict["overall"] = verdict_name(report.verdict->verdict);
    verdict["better_pairs"] = ordered_json::array();
    for (const auto& [x, y] : report.verdict->better_pairs) {
      verdict["better_pairs"].push_back({{"x", x}, {"y", y}});
    }
    verdict["rejecting_environments"] = report.verdict->rejecting_environments;
  }
  return root.dump(2) + "\n";
}

std::string render_text(const ComparisonReport& report) {
  std::ostringstream out;
  out.precision(4);
  out << "diffrl " << report.command << ": " << report.implementations.size()
      << " implementations, " << report.environments.size() << " environments, seed "
      << report.config.seed << ", " << report.config.resamples << " resamples, "
      << report.config.confidence * 100 << "% CI\n";

  if (!report.anova.empty()) {
    out << "\nANOVA on MeanReward100 (alpha " << report.config.alpha << ")\n";
    for (const auto& a : report.anova) {
      out << "  " << a.environment << ": ";
      if (!a.result) {
        out << "insufficient data\n";
        continue;
      }
      out << "F=" << a.result->f_statistic << " p=" << a.result->p_value
          << (a.result->reject ? "  REJECT" : "") << '\n';
    }
  }

  if (report.profile) {
    const auto& tau = report.profile->tau_grid;
    const auto it = std::find(tau.begin(), tau.end(), 1.0);
    out << "\nPerformance profile";
    if (it != tau.end()) {
      const auto t = static_cast<std::size_t>(it - tau.begin());
      out << " at tau=1 (superhuman fraction)\n";
      for (std::size_t i = 0; i < report.profile->implementations.size(); ++i) {
        const auto& e = report.profile->curves[i][t];
        out << "  " << report.profile->implementations[i] << ": " << e.point << " ["
            << e.ci_lower << ", " << e.ci_upper << "]\n";
      }
    } else {
      out << ": " << tau.size() << " tau values (tau=1 not on grid)\n";
    }
  }

  if (!report.aggregates.empty()) {
    out << "\nAggregates (normalized score)\n";
    for (const auto& a : report.aggregates) {
      out << "  " << a.implementation << ": mean " << a.mean.point << ", IQM "
          << a.interquartile_mean.point << ", optimality gap " << a.optimality_gap.point
          << '\n';
    }
  }

  if (!report.poi.empty()) {
    out << "\nProbability of improvement P(X > Y)\n";
    for (const auto& p : report.poi) {
      out << "  " << p.x_implementation << " > " << p.y_implementation << ": "
          << p.estimate.point << " [" << p.estimate.ci_lower << ", " << p.estimate.ci_upper
          << "]" << (p.better ? "  BETTER" : "") << '\n';
    }
  }

  if (report.verdict) {
    out << "\nVerdict: " << verdict_name(report.verdict->verdict) << '\n';
    for (const auto& [x, y] : report.verdict->better_pairs) {
      out << "  " << x << " is better than " << y << '\n';
    }
    for (const auto& env : report.verdict->rejecting_environments) {
      out << "  means differ in " << env << '\n';
    }
  }
  return out.str();
}

}  // namespace diffrl
