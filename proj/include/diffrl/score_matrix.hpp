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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diffrl {

/// Per-trial values indexed by (stratum, implementation, trial).
///
/// Strata are environments. A cell holds the ordered trial values of one
/// implementation on one environment; cell sizes may differ. The same type
/// carries normalized scores (bootstrap input) and raw MeanReward100 values
/// (ANOVA input).
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<std::string> strata,
              std::vector<std::string> implementations);

  const std::vector<std::string>& strata() const noexcept { return strata_; }
  const std::vector<std::string>& implementations() const noexcept {
    return implementations_;
  }
  std::size_t stratum_count() const noexcept { return strata_.size(); }
  std::size_t implementation_count() const noexcept {
    return implementations_.size();
  }

  void set_cell(std::size_t stratum, std::size_t implementation,
                std::vector<double> values);
  void append(std::size_t stratum, std::size_t implementation, double value);

  std::span<const double> cell(std::size_t stratum,
                               std::size_t implementation) const;
  std::size_t cell_size(std::size_t stratum,
                        std::size_t implementation) const {
    return cell(stratum, implementation).size();
  }

  std::optional<std::size_t> implementation_index(std::string_view name) const;
  std::optional<std::size_t> stratum_index(std::string_view name) const;

  /// Index of `name`; throws if the implementation is unknown or has an
  /// empty cell in any stratum.
  std::size_t require_complete(std::string_view name) const;

  /// Number of non-empty cells.
  std::size_t populated_cells() const;
  /// Total number of values across all cells.
  std::size_t value_count() const;

  /// Values of one implementation pooled over strata, in stratum order.
  std::vector<double> pooled(std::size_t implementation) const;

  /// Copy restricted to `names`, kept in this matrix's order.
  ScoreMatrix select(std::span<const std::string> names) const;

  bool operator==(const ScoreMatrix&) const = default;

 private:
  std::size_t offset(std::size_t stratum, std::size_t implementation) const;

  std::vector<std::string> strata_;
  std::vector<std::string> implementations_;
  std::vector<std::vector<double>> cells_;
};

}  // namespace diffrl
