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
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace diffrl {

/// Reference rewards of one environment, in game-score units.
struct BaselineEntry {
  std::string environment;
  double random_play = 0.0;
  double human_play = 0.0;

  bool operator==(const BaselineEntry&) const = default;
};

/// Human-normalized score. Unclamped; above 1 means superhuman.
struct NormalizedScore {
  double value = 0.0;

  bool superhuman() const noexcept { return value > 1.0; }
};

/// Baselines keyed by environment, iterated in lexicographic order.
class BaselineTable {
 public:
  using Map = std::map<std::string, BaselineEntry, std::less<>>;

  /// Throws on duplicate environment.
  void insert(BaselineEntry entry);

  const BaselineEntry* find(std::string_view environment) const;
  /// Throws MissingBaselineError.
  const BaselineEntry& at(std::string_view environment) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

  bool operator==(const BaselineTable&) const = default;

 private:
  Map entries_;
};

/// (mean_reward - random_play) / (human_play - random_play).
/// Throws DegenerateBaselineError when the two baselines are equal.
NormalizedScore normalize_score(double mean_reward, const BaselineEntry& baseline);

/// Reads `environment,random_play,human_play` rows.
BaselineTable load_baseline_table(std::istream& in);
BaselineTable load_baseline_table(std::string_view text);

std::string serialize_baseline_table(const BaselineTable& table);

}  // namespace diffrl
