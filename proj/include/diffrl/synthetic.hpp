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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "diffrl/bootstrap.hpp"
#include "diffrl/normalization.hpp"
#include "diffrl/trial_data.hpp"

namespace diffrl {

struct ConstantModel {
  double value = 0.0;
};

struct UniformModel {
  double lo = 0.0;
  double hi = 1.0;
};

struct NormalModel {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Logistic ramp from `start` to `plateau` plus Gaussian episode noise.
struct LearningCurveModel {
  double start = 0.0;
  double plateau = 1.0;
  double ramp_midpoint = 0.0;
  double ramp_width = 1.0;
  double noise_sigma = 0.0;

  double mean_at(std::size_t episode) const;
};

/// Distribution of a single episode reward.
using RewardModel =
    std::variant<ConstantModel, UniformModel, NormalModel, LearningCurveModel>;

/// Throws when a model parameter is out of range.
void validate(const RewardModel& model);
std::string model_name(const RewardModel& model);

struct SyntheticImplSpec {
  std::string implementation;
  std::map<std::string, RewardModel, std::less<>> environments;
  std::size_t episodes_per_trial = 1;
  std::size_t trials = 1;
};

/// Parsed spec file: implementations plus optional baselines.
struct SyntheticSuite {
  std::vector<SyntheticImplSpec> implementations;
  BaselineTable baselines;
};

/// JSON spec file; errors name the offending JSON path.
SyntheticSuite parse_synthetic_spec(std::string_view text);

/// Deterministic in `master_seed`; episode rewards of each (implementation,
/// environment, trial) come from their own counter-based substream.
TrialDataset generate_synthetic_trials(std::span<const SyntheticImplSpec> specs,
                                       std::uint64_t master_seed,
                                       Execution execution = Execution::parallel);

/// P(X > Y) for two normal or constant models, ties counted 1/2.
double analytic_poi(const RewardModel& x, const RewardModel& y);

/// Distribution of MeanReward100 for a trial of `episodes` episodes.
/// `normal` is false only for the uniform model (Irwin-Hall shaped).
struct TrialScoreDistribution {
  double mean = 0.0;
  double sd = 0.0;
  bool normal = true;

  /// Normal (or constant, when sd = 0) model of the trial score.
  RewardModel as_model() const;
};

TrialScoreDistribution trial_score_distribution(const RewardModel& model,
                                                std::size_t episodes);

/// Truth sidecar describing a suite as JSON text.
std::string synthetic_truth_json(const SyntheticSuite& suite);

}  // namespace diffrl
