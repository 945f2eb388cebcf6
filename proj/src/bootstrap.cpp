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

#include "diffrl/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "diffrl/error.hpp"
#include "diffrl/kernels.hpp"
#include "resample_detail.hpp"

namespace diffrl {

AggregationMetric AggregationMetric::fraction_above(double tau) {
  if (!std::isfinite(tau)) throw Error("fraction_above needs a finite tau");
  return AggregationMetric(Kind::fraction_above, tau);
}

std::string AggregationMetric::name() const {
  switch (kind_) {
    case Kind::mean:
      return "mean";
    case Kind::interquartile_mean:
      return "interquartile_mean";
    case Kind::optimality_gap:
      return "optimality_gap";
    case Kind::fraction_above: {
      std::ostringstream out;
      out << "fraction_above(" << tau_ << ")";
      return out.str();
    }
  }
  return {};
}

namespace {

double interquartile_mean(std::span<const double> scores) {
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<std::int64_t>(sorted.size());
  // In units of 1/(4n): order statistic i covers [4i, 4i + 4], the kept mass
  // is [n, 3n]. Weights are integers summing to 2n.
  double weighted = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto w = std::min(4 * i + 4, 3 * n) - std::max(4 * i, n);
    if (w <= 0) continue;
    weighted += static_cast<double>(w) * sorted[static_cast<std::size_t>(i)];
    lo = std::min(lo, sorted[static_cast<std::size_t>(i)]);
    hi = std::max(hi, sorted[static_cast<std::size_t>(i)]);
  }
  return std::clamp(weighted / static_cast<double>(2 * n), lo, hi);
}

}  // namespace

double aggregate(std::span<const double> scores, const AggregationMetric& metric) {
  if (scores.empty()) throw Error("cannot aggregate an empty score collection");
  switch (metric.kind()) {
    case AggregationMetric::Kind::mean:
      return detail::bounded_mean(scores);
    case AggregationMetric::Kind::interquartile_mean:
      return interquartile_mean(scores);
    case AggregationMetric::Kind::optimality_gap: {
      std::vector<double> gaps(scores.size());
      std::transform(scores.begin(), scores.end(), gaps.begin(),
                     [](double s) { return std::max(0.0, 1.0 - s); });
      return detail::bounded_mean(gaps);
    }
    case AggregationMetric::Kind::fraction_above: {
      const auto above = std::count_if(scores.begin(), scores.end(),
                                       [&](double s) { return s > metric.tau(); });
      return static_cast<double>(above) / static_cast<double>(scores.size());
    }
  }
  throw Error("unknown aggregation metric");
}

void validate(const BootstrapOptions& options) {
  if (options.resamples < 2) throw Error("resamples must be at least 2");
  if (options.resamples > std::numeric_limits<std::uint32_t>::max()) {
    throw Error("resamples must fit in 32 bits");
  }
  if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
    throw Error("confidence must lie strictly between 0 and 1");
  }
}

CounterRng bootstrap_stream(std::uint64_t master_seed, std::string_view implementation,
                            std::size_t resample) {
  std::string tag = "boot/";
  tag += implementation;
  return CounterRng(master_seed, fnv1a64(tag), static_cast<std::uint32_t>(resample));
}

std::vector<std::vector<double>> stratified_resample(const ScoreMatrix& matrix,
                                                     std::string_view implementation,
                                                     CounterRng& rng) {
  const auto index = matrix.require_complete(implementation);
  std::vector<double> pooled;
  detail::draw_stratified(matrix, index, rng, pooled);

  std::vector<std::vector<double>> out(matrix.stratum_count());
  auto it = pooled.begin();
  for (std::size_t s = 0; s < matrix.stratum_count(); ++s) {
    const auto n = static_cast<std::ptrdiff_t>(matrix.cell_size(s, index));
    out[s].assign(it, it + n);
    it += n;
  }
  return out;
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("quantile level must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  const double value = sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  return std::clamp(value, sorted[lo], sorted[lo + 1]);
}

EstimateWithCI percentile_interval(double point, std::vector<double> replicates,
                                   double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error("confidence must lie strictly between 0 and 1");
  }
  std::sort(replicates.begin(), replicates.end());
  const double tail = (1.0 - confidence) / 2.0;
  EstimateWithCI estimate;
  estimate.point = point;
  estimate.ci_lower = sorted_quantile(replicates, tail);
  estimate.ci_upper = sorted_quantile(replicates, 1.0 - tail);
  estimate.confidence = confidence;
  estimate.resamples = replicates.size();
  return estimate;
}

std::vector<EstimateWithCI> sbci(const ScoreMatrix& matrix,
                                 std::string_view implementation,
                                 std::span<const AggregationMetric> metrics,
                                 const BootstrapOptions& options) {
  validate(options);
  const auto index = matrix.require_complete(implementation);
  const auto original = matrix.pooled(index);

  const auto replicates =
      options.execution == Execution::parallel
          ? kernels::bootstrap_aggregates_parallel(matrix, index, metrics,
                                                   options.resamples, options.master_seed)
          : kernels::bootstrap_aggregates_serial(matrix, index, metrics,
                                                 options.resamples, options.master_seed);

  std::vector<EstimateWithCI> out;
  out.reserve(metrics.size());
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    out.push_back(percentile_interval(aggregate(original, metrics[m]), replicates[m],
                                      options.confidence));
  }
  return out;
}

EstimateWithCI sbci(const ScoreMatrix& matrix, std::string_view implementation,
                    const AggregationMetric& metric, const BootstrapOptions& options) {
  return sbci(matrix, implementation, std::span(&metric, 1), options).front();
}

const std::vector<EstimateWithCI>& PerformanceProfile::curve(
    std::string_view implementation) const {
  for (std::size_t i = 0; i < implementations.size(); ++i) {
    if (implementations[i] == implementation) return curves[i];
  }
  throw Error("no profile for implementation '" + std::string(implementation) + "'");
}

std::vector<double> default_tau_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(i * 0.05);
  return grid;
}

PerformanceProfile performance_profile(const ScoreMatrix& matrix,
                                       std::span<const std::string> implementations,
                                       std::span<const double> tau_grid,
                                       const BootstrapOptions& options) {
  if (tau_grid.empty()) throw Error("tau grid is empty");
  for (std::size_t t = 0; t < tau_grid.size(); ++t) {
    if (!std::isfinite(tau_grid[t])) throw Error("tau grid values must be finite");
    if (t > 0 && !(tau_grid[t] > tau_grid[t - 1])) {
      throw Error("tau grid must be strictly increasing");
    }
  }

  std::vector<AggregationMetric> metrics;
  metrics.reserve(tau_grid.size());
  for (double tau : tau_grid) metrics.push_back(AggregationMetric::fraction_above(tau));

  PerformanceProfile profile;
  profile.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  for (const auto& name : implementations) {
    profile.implementations.push_back(name);
    profile.curves.push_back(sbci(matrix, name, metrics, options));
  }
  return profile;
}

}  // namespace diffrl
