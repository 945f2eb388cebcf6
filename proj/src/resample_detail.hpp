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

// Pieces shared by the bootstrap API and the replicate kernels. Keeping a
// single draw routine guarantees that every caller consumes a stream in the
// same order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "diffrl/rng.hpp"
#include "diffrl/score_matrix.hpp"

namespace diffrl::detail {

/// Appends one stratified resample of `implementation` to `out`, strata in
/// matrix order, N_m draws from stratum m.
inline void draw_stratified(const ScoreMatrix& matrix, std::size_t implementation,
                            CounterRng& rng, std::vector<double>& out) {
  for (std::size_t s = 0; s < matrix.stratum_count(); ++s) {
    const auto cell = matrix.cell(s, implementation);
    const auto n = static_cast<std::uint32_t>(cell.size());
    for (std::uint32_t k = 0; k < n; ++k) out.push_back(cell[rng.uniform_index(n)]);
  }
}

/// Mean with Neumaier compensation, kept inside [min, max] of the input.
inline double bounded_mean(std::span<const double> values) {
  double sum = 0.0;
  double compensation = 0.0;
  double lo = values.front();
  double hi = values.front();
  for (double v : values) {
    const double t = sum + v;
    compensation += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::clamp((sum + compensation) / static_cast<double>(values.size()), lo, hi);
}

}  // namespace diffrl::detail
