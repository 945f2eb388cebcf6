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

#include "diffrl/score_matrix.hpp"

#include <algorithm>

#include "diffrl/error.hpp"

namespace diffrl {

ScoreMatrix::ScoreMatrix(std::vector<std::string> strata,
                         std::vector<std::string> implementations)
    : strata_(std::move(strata)),
      implementations_(std::move(implementations)),
      cells_(strata_.size() * implementations_.size()) {}

std::size_t ScoreMatrix::offset(std::size_t stratum,
                                std::size_t implementation) const {
  if (stratum >= strata_.size() || implementation >= implementations_.size()) {
    throw Error("score matrix index out of range");
  }
  return stratum * implementations_.size() + implementation;
}

void ScoreMatrix::set_cell(std::size_t stratum, std::size_t implementation,
                           std::vector<double> values) {
  cells_[offset(stratum, implementation)] = std::move(values);
}

void ScoreMatrix::append(std::size_t stratum, std::size_t implementation,
                         double value) {
  cells_[offset(stratum, implementation)].push_back(value);
}

std::span<const double> ScoreMatrix::cell(std::size_t stratum,
                                          std::size_t implementation) const {
  return cells_[offset(stratum, implementation)];
}

namespace {
std::optional<std::size_t> index_of(const std::vector<std::string>& names,
                                    std::string_view name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}
}  // namespace

std::optional<std::size_t> ScoreMatrix::implementation_index(
    std::string_view name) const {
  return index_of(implementations_, name);
}

std::optional<std::size_t> ScoreMatrix::stratum_index(std::string_view name) const {
  return index_of(strata_, name);
}

std::size_t ScoreMatrix::require_complete(std::string_view name) const {
  const auto index = implementation_index(name);
  if (!index) throw Error("unknown implementation '" + std::string(name) + "'");
  if (strata_.empty()) throw Error("score matrix has no strata");
  for (std::size_t s = 0; s < strata_.size(); ++s) {
    if (cell(s, *index).empty()) {
      throw Error("implementation '" + std::string(name) +
                  "' has no trials in environment '" + strata_[s] + "'");
    }
  }
  return *index;
}

std::size_t ScoreMatrix::populated_cells() const {
  return static_cast<std::size_t>(std::count_if(
      cells_.begin(), cells_.end(), [](const auto& c) { return !c.empty(); }));
}

std::size_t ScoreMatrix::value_count() const {
  std::size_t n = 0;
  for (const auto& c : cells_) n += c.size();
  return n;
}

std::vector<double> ScoreMatrix::pooled(std::size_t implementation) const {
  std::vector<double> out;
  for (std::size_t s = 0; s < strata_.size(); ++s) {
    const auto c = cell(s, implementation);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

ScoreMatrix ScoreMatrix::select(std::span<const std::string> names) const {
  std::vector<std::size_t> keep;
  for (const auto& name : names) {
    const auto index = implementation_index(name);
    if (!index) throw Error("unknown implementation '" + name + "'");
    keep.push_back(*index);
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  std::vector<std::string> kept_names;
  for (auto i : keep) kept_names.push_back(implementations_[i]);
  ScoreMatrix out(strata_, std::move(kept_names));
  for (std::size_t s = 0; s < strata_.size(); ++s) {
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const auto c = cell(s, keep[k]);
      out.set_cell(s, k, {c.begin(), c.end()});
    }
  }
  return out;
}

}  // namespace diffrl
