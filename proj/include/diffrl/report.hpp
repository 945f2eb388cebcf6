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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffrl/bootstrap.hpp"
#include "diffrl/hypothesis.hpp"
#include "diffrl/normalization.hpp"
#include "diffrl/trial_data.hpp"

namespace diffrl {

inline constexpr const char* kReportSchema = "diffrl-report/1";

struct AnalysisConfig {
  std::size_t resamples = 2000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  std::vector<double> tau_grid = default_tau_grid();
  double alpha = kDefaultAlpha;
  double meaningful_threshold = kDefaultMeaningfulThreshold;
  // Restricts every analysis to these implementations; empty means all.
  std::vector<std::string> implementations;
  Execution execution = Execution::parallel;

  BootstrapOptions bootstrap() const {
    return {resamples, confidence, seed, execution};
  }
};

/// Throws on out-of-range settings.
void validate(const AnalysisConfig& config);

/// Mean of the trials' MeanReward100 in one (environment, implementation).
struct MeanRewardCell {
  std::string environment;
  std::string implementation;
  std::size_t trials = 0;
  double mean_reward = 0.0;
  double min_reward = 0.0;
  double max_reward = 0.0;
};

struct AnovaEntry {
  std::string environment;
  // Empty when some implementation has fewer than two trials there.
  std::optional<AnovaResult> result;
};

struct AggregateSummary {
  std::string implementation;
  EstimateWithCI mean;
  EstimateWithCI interquartile_mean;
  EstimateWithCI optimality_gap;
};

enum class Verdict { interchangeable, not_interchangeable };

struct VerdictSummary {
  Verdict verdict = Verdict::interchangeable;
  std::vector<std::pair<std::string, std::string>> better_pairs;
  std::vector<std::string> rejecting_environments;
};

struct InputDigests {
  std::string trials;
  std::string baselines;
};

struct ComparisonReport {
  std::string command;
  AnalysisConfig config;
  InputDigests inputs;
  std::vector<std::string> environments;
  std::vector<std::string> implementations;
  std::vector<MeanRewardCell> mean_rewards;
  std::vector<AnovaEntry> anova;
  std::optional<PerformanceProfile> profile;
  std::vector<AggregateSummary> aggregates;
  std::vector<PoiResult> poi;
  std::optional<VerdictSummary> verdict;
};

/// Verdict from POI flags and ANOVA rejections.
VerdictSummary decide_verdict(const std::vector<PoiResult>& poi,
                              const std::vector<AnovaEntry>& anova);

/// 16 hex digits of FNV-1a over the bytes.
std::string content_digest(std::string_view bytes);

// The run_* functions apply config.implementations, then require at least
// two implementations (one for profile).
ComparisonReport run_compare(const TrialDataset& dataset,
                             const BaselineTable& baselines,
                             const AnalysisConfig& config,
                             InputDigests inputs = {});
ComparisonReport run_profile(const TrialDataset& dataset,
                             const BaselineTable& baselines,
                             const AnalysisConfig& config,
                             InputDigests inputs = {});
ComparisonReport run_poi(const TrialDataset& dataset,
                         const BaselineTable& baselines,
                         const AnalysisConfig& config,
                         InputDigests inputs = {});
ComparisonReport run_anova(const TrialDataset& dataset,
                           const AnalysisConfig& config,
                           InputDigests inputs = {});

/// Versioned JSON document, stable key order, trailing newline.
std::string render_json(const ComparisonReport& report);
/// Short human-readable summary.
std::string render_text(const ComparisonReport& report);

}  // namespace diffrl
