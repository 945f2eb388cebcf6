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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffrl/normalization.hpp"
#include "diffrl/score_matrix.hpp"

namespace diffrl {

struct TrialKey {
  std::string implementation;
  std::string environment;
  std::uint32_t trial_index = 0;

  auto operator<=>(const TrialKey&) const = default;
  std::string to_string() const;
};

/// One training run of one implementation on one environment.
struct TrialRecord {
  std::string implementation;
  std::string environment;
  std::uint32_t trial_index = 0;
  std::vector<double> episode_rewards;
  // Set for rows of the pre-aggregated format; episode_rewards is then empty.
  std::optional<double> reported_mean_reward_100;

  TrialKey key() const { return {implementation, environment, trial_index}; }
  bool operator==(const TrialRecord&) const = default;
};

struct MeanReward100 {
  double value = 0.0;
  std::size_t episodes_used = 0;
};

/// Validated set of trial records, sorted by (implementation, environment,
/// trial). Environment and implementation lists are sorted and unique.
class TrialDataset {
 public:
  TrialDataset() = default;
  /// Throws on a duplicate key or a record with neither episodes nor a
  /// reported mean.
  explicit TrialDataset(std::vector<TrialRecord> records);

  std::span<const TrialRecord> records() const noexcept { return records_; }
  const std::vector<std::string>& environments() const noexcept {
    return environments_;
  }
  const std::vector<std::string>& implementations() const noexcept {
    return implementations_;
  }
  bool empty() const noexcept { return records_.empty(); }
  std::size_t size() const noexcept { return records_.size(); }

  /// Trials of `implementation` on `environment`.
  std::size_t cell_count(std::string_view implementation,
                         std::string_view environment) const;

  const TrialRecord* find(const TrialKey& key) const;

  /// True when every record came from the pre-aggregated format.
  bool pre_aggregated() const;

  /// Subset holding only the named implementations; throws on unknown names.
  TrialDataset select(std::span<const std::string> implementations) const;

  bool operator==(const TrialDataset&) const = default;

 private:
  std::vector<TrialRecord> records_;
  std::vector<std::string> environments_;
  std::vector<std::string> implementations_;
};

/// Parses either `implementation,environment,trial,episode,reward` or
/// `implementation,environment,trial,mean_reward_100` text. Errors carry the
/// 1-based line number.
TrialDataset parse_trial_log(std::istream& in);
TrialDataset parse_trial_log(std::string_view text);

/// Writes the per-episode format, or the pre-aggregated format when every
/// record is pre-aggregated. Throws for mixed datasets.
void write_trial_log(std::ostream& out, const TrialDataset& dataset);
std::string serialize_trial_log(const TrialDataset& dataset);

/// Mean of the last min(100, n) episode rewards.
MeanReward100 mean_reward_100(const TrialRecord& record);

/// Normalized MeanReward100 of every record; strata are the environments.
ScoreMatrix build_score_matrix(const TrialDataset& dataset,
                               const BaselineTable& baselines);

/// Raw MeanReward100 of every record, same layout as build_score_matrix.
ScoreMatrix build_mean_reward_matrix(const TrialDataset& dataset);

}  // namespace diffrl
