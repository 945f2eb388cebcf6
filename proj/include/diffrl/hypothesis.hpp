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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffrl/bootstrap.hpp"
#include "diffrl/score_matrix.hpp"

namespace diffrl {

inline constexpr double kDefaultAlpha = 0.05;
inline constexpr double kDefaultMeaningfulThreshold = 0.75;

/// Mann-Whitney count for one environment: `twice_wins` is twice the sum of
/// S(x, y) over all pairs (ties count 1, wins 2), so the ratio is exact.
struct PoiCounts {
  std::uint64_t twice_wins = 0;
  std::uint64_t pairs = 0;

  double value() const {
    return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pairs));
  }
};

/// O((n + m) log m). Throws on empty input.
PoiCounts poi_env_counts(std::span<const double> x, std::span<const double> y);

/// P(X > Y) on one environment, normalized by |x| * |y|.
double poi_env(std::span<const double> x, std::span<const double> y);

/// Unweighted mean of poi_env over all strata.
double poi_overall(const ScoreMatrix& matrix, std::string_view x,
                   std::string_view y);

struct PoiVerdict {
  bool significant = false;
  bool meaningful = false;
  bool better = false;
};

/// Neyman-Pearson flags read off an interval:
/// significant: point > 0.5 and 0.5 outside [ci_lower, ci_upper];
/// meaningful: ci_upper > meaningful_threshold.
PoiVerdict poi_verdict(const EstimateWithCI& estimate,
                       double meaningful_threshold = kDefaultMeaningfulThreshold);

struct PoiResult {
  std::string x_implementation;
  std::string y_implementation;
  EstimateWithCI estimate;
  bool significant = false;
  bool meaningful = false;
  bool better = false;
};

/// Overall POI with a stratified bootstrap interval; x and y are resampled
/// independently within each stratum.
PoiResult poi_with_ci(const ScoreMatrix& matrix, std::string_view x,
                      std::string_view y, const BootstrapOptions& options = {},
                      double meaningful_threshold = kDefaultMeaningfulThreshold);

struct AnovaResult {
  std::string environment;
  double f_statistic = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  double ss_between = 0.0;
  double ss_within = 0.0;
};

/// Classical one-way ANOVA. Needs >= 2 groups of >= 2 values each.
/// All values identical: F = 0, p = 1. Zero within-group variance with
/// distinct group means: F = +inf, p = 0.
AnovaResult anova_oneway(std::span<const std::vector<double>> groups,
                         double alpha = kDefaultAlpha,
                         std::string environment = {});

/// Upper tail P(F > f) of the F(d1, d2) distribution.
double f_distribution_sf(double f, std::int64_t d1, std::int64_t d2);

}  // namespace diffrl
