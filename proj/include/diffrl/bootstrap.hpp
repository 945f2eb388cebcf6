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

#include "diffrl/rng.hpp"
#include "diffrl/score_matrix.hpp"

namespace diffrl {

/// Statistic applied to a pooled collection of scores.
class AggregationMetric {
 public:
  enum class Kind { mean, interquartile_mean, optimality_gap, fraction_above };

  static AggregationMetric mean() { return AggregationMetric(Kind::mean, 0.0); }
  static AggregationMetric interquartile_mean() {
    return AggregationMetric(Kind::interquartile_mean, 0.0);
  }
  static AggregationMetric optimality_gap() {
    return AggregationMetric(Kind::optimality_gap, 0.0);
  }
  /// Fraction of scores strictly above `tau`; throws if tau is not finite.
  static AggregationMetric fraction_above(double tau);

  Kind kind() const noexcept { return kind_; }
  double tau() const noexcept { return tau_; }
  std::string name() const;

  bool operator==(const AggregationMetric&) const = default;

 private:
  AggregationMetric(Kind kind, double tau) : kind_(kind), tau_(tau) {}

  Kind kind_;
  double tau_;
};

/// Throws on an empty collection.
///
/// interquartile_mean trims a quarter of the probability mass from each end
/// of the empirical distribution, weighting the boundary order statistics
/// fractionally, so it is defined for every n >= 1 and equals the usual
/// 25% trimmed mean when n is a multiple of 4.
double aggregate(std::span<const double> scores, const AggregationMetric& metric);

struct EstimateWithCI {
  double point = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double confidence = 0.95;
  std::size_t resamples = 0;

  bool operator==(const EstimateWithCI&) const = default;
};

enum class Execution { serial, parallel };

struct BootstrapOptions {
  std::size_t resamples = 2000;
  double confidence = 0.95;
  std::uint64_t master_seed = 0;
  Execution execution = Execution::parallel;
};

/// Throws unless resamples >= 2 and confidence is in (0, 1).
void validate(const BootstrapOptions& options);

/// Draw stream for one bootstrap resample of one implementation.
CounterRng bootstrap_stream(std::uint64_t master_seed,
                            std::string_view implementation,
                            std::size_t resample);

/// One stratified resample: for each stratum, as many draws with
/// replacement as the cell holds, taken only from that cell.
/// Returned per stratum, in stratum order.
std::vector<std::vector<double>> stratified_resample(const ScoreMatrix& matrix,
                                                     std::string_view implementation,
                                                     CounterRng& rng);

/// Linear-interpolation quantile of sorted data, p in [0, 1].
double sorted_quantile(std::span<const double> sorted, double p);

/// Percentile interval over bootstrap replicates.
EstimateWithCI percentile_interval(double point, std::vector<double> replicates,
                                   double confidence);

/// Stratified bootstrap confidence interval of `metric`. The point estimate
/// is the metric on the original pooled scores.
EstimateWithCI sbci(const ScoreMatrix& matrix, std::string_view implementation,
                    const AggregationMetric& metric,
                    const BootstrapOptions& options = {});

/// Several metrics evaluated on the same resamples. Each result equals the
/// single-metric call with the same options.
std::vector<EstimateWithCI> sbci(const ScoreMatrix& matrix,
                                 std::string_view implementation,
                                 std::span<const AggregationMetric> metrics,
                                 const BootstrapOptions& options = {});

struct PerformanceProfile {
  std::vector<double> tau_grid;
  std::vector<std::string> implementations;
  // curves[i][t] belongs to implementations[i] at tau_grid[t].
  std::vector<std::vector<EstimateWithCI>> curves;

  const std::vector<EstimateWithCI>& curve(std::string_view implementation) const;
};

/// 0.00, 0.05, ..., 2.00.
std::vector<double> default_tau_grid();

/// Fraction-above-tau SBCI for each implementation at each tau. The grid
/// must be strictly increasing and finite.
PerformanceProfile performance_profile(const ScoreMatrix& matrix,
                                       std::span<const std::string> implementations,
                                       std::span<const double> tau_grid,
                                       const BootstrapOptions& options = {});

}  // namespace diffrl
