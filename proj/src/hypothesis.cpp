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

#include "diffrl/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diffrl/error.hpp"
#include "diffrl/kernels.hpp"
#include "diffrl/special_functions.hpp"
#include "resample_detail.hpp"

namespace diffrl {

PoiCounts poi_env_counts(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw Error("probability of improvement needs non-empty inputs");
  std::vector<double> sorted_y(y.begin(), y.end());
  std::sort(sorted_y.begin(), sorted_y.end());

  PoiCounts counts;
  for (double v : x) {
    const auto [lo, hi] = std::equal_range(sorted_y.begin(), sorted_y.end(), v);
    const auto below = static_cast<std::uint64_t>(lo - sorted_y.begin());
    const auto tied = static_cast<std::uint64_t>(hi - lo);
    counts.twice_wins += 2 * below + tied;
  }
  counts.pairs = static_cast<std::uint64_t>(x.size()) * y.size();
  return counts;
}

double poi_env(std::span<const double> x, std::span<const double> y) {
  return poi_env_counts(x, y).value();
}

double poi_overall(const ScoreMatrix& matrix, std::string_view x, std::string_view y) {
  const auto xi = matrix.require_complete(x);
  const auto yi = matrix.require_complete(y);
  double total = 0.0;
  for (std::size_t s = 0; s < matrix.stratum_count(); ++s) {
    total += poi_env(matrix.cell(s, xi), matrix.cell(s, yi));
  }
  return total / static_cast<double>(matrix.stratum_count());
}

PoiVerdict poi_verdict(const EstimateWithCI& estimate, double meaningful_threshold) {
  PoiVerdict v;
  const bool half_inside = estimate.ci_lower <= 0.5 && 0.5 <= estimate.ci_upper;
  v.significant = estimate.point > 0.5 && !half_inside;
  v.meaningful = estimate.ci_upper > meaningful_threshold;
  v.better = v.significant && v.meaningful;
  return v;
}

PoiResult poi_with_ci(const ScoreMatrix& matrix, std::string_view x, std::string_view y,
                      const BootstrapOptions& options, double meaningful_threshold) {
  validate(options);
  const auto xi = matrix.require_complete(x);
  const auto yi = matrix.require_complete(y);
  const double point = poi_overall(matrix, x, y);
  auto replicates =
      options.execution == Execution::parallel
          ? kernels::bootstrap_poi_parallel(matrix, xi, yi, options.resamples,
                                            options.master_seed)
          : kernels::bootstrap_poi_serial(matrix, xi, yi, options.resamples,
                                          options.master_seed);

  PoiResult result;
  result.x_implementation = x;
  result.y_implementation = y;
  result.estimate = percentile_interval(point, std::move(replicates), options.confidence);
  const auto verdict = poi_verdict(result.estimate, meaningful_threshold);
  result.significant = verdict.significant;
  result.meaningful = verdict.meaningful;
  result.better = verdict.better;
  return result;
}

AnovaResult anova_oneway(std::span<const std::vector<double>> groups, double alpha,
                         std::string environment) {
  if (groups.size() < 2) throw Error("one-way ANOVA needs at least 2 groups");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie strictly between 0 and 1");
  std::vector<double> all;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error("one-way ANOVA needs at least 2 values per group");
    all.insert(all.end(), g.begin(), g.end());
  }
  const double grand = detail::bounded_mean(all);

  AnovaResult result;
  result.environment = std::move(environment);
  result.df_between = groups.size() - 1;
  result.df_within = all.size() - groups.size();
  for (const auto& g : groups) {
    const double mean = detail::bounded_mean(g);
    const double shift = mean - grand;
    result.ss_between += static_cast<double>(g.size()) * shift * shift;
    for (double v : g) result.ss_within += (v - mean) * (v - mean);
  }

  if (result.ss_within == 0.0) {
    if (result.ss_between == 0.0) {
      result.f_statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.f_statistic = std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
    }
  } else {
    result.f_statistic = (result.ss_between / static_cast<double>(result.df_between)) /
                         (result.ss_within / static_cast<double>(result.df_within));
    result.p_value = f_distribution_sf(result.f_statistic,
                                       static_cast<std::int64_t>(result.df_between),
                                       static_cast<std::int64_t>(result.df_within));
  }
  result.reject = result.p_value < alpha;
  return result;
}

double f_distribution_sf(double f, std::int64_t d1, std::int64_t d2) {
  if (d1 < 1 || d2 < 1) throw Error("F distribution degrees of freedom must be positive");
  if (std::isnan(f) || f < 0.0) throw Error("F statistic must be non-negative");
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double a = static_cast<double>(d1);
  const double b = static_cast<double>(d2);
  return regularized_incomplete_beta(b / 2.0, a / 2.0, b / (b + a * f));
}

}  // namespace diffrl
