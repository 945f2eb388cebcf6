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

#include "diffrl/kernels.hpp"

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "diffrl/hypothesis.hpp"
#include "resample_detail.hpp"

namespace diffrl::kernels {

namespace {

// Both kernel flavours call these per-replicate bodies; only the loop
// scheduling differs.

void aggregate_replicate(const ScoreMatrix& matrix, std::size_t implementation,
                         std::span<const AggregationMetric> metrics,
                         std::uint64_t master_seed, std::size_t r,
                         std::vector<double>& buffer, Replicates& out) {
  auto rng = bootstrap_stream(master_seed, matrix.implementations()[implementation], r);
  buffer.clear();
  detail::draw_stratified(matrix, implementation, rng, buffer);
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    out[m][r] = aggregate(buffer, metrics[m]);
  }
}

struct PoiBuffers {
  std::vector<double> x;
  std::vector<double> y;
};

double poi_replicate(const ScoreMatrix& matrix, std::size_t x, std::size_t y,
                     std::uint64_t master_seed, std::size_t r, PoiBuffers& buffers) {
  auto rng_x = bootstrap_stream(master_seed, matrix.implementations()[x], r);
  auto rng_y = bootstrap_stream(master_seed, matrix.implementations()[y], r);
  buffers.x.clear();
  buffers.y.clear();
  detail::draw_stratified(matrix, x, rng_x, buffers.x);
  detail::draw_stratified(matrix, y, rng_y, buffers.y);

  double total = 0.0;
  std::size_t ox = 0;
  std::size_t oy = 0;
  const std::span<const double> all_x(buffers.x);
  const std::span<const double> all_y(buffers.y);
  for (std::size_t s = 0; s < matrix.stratum_count(); ++s) {
    const auto nx = matrix.cell_size(s, x);
    const auto ny = matrix.cell_size(s, y);
    total += poi_env(all_x.subspan(ox, nx), all_y.subspan(oy, ny));
    ox += nx;
    oy += ny;
  }
  return total / static_cast<double>(matrix.stratum_count());
}

Replicates make_replicates(std::size_t metrics, std::size_t resamples) {
  return Replicates(metrics, std::vector<double>(resamples));
}

}  // namespace

Replicates bootstrap_aggregates_serial(const ScoreMatrix& matrix,
                                       std::size_t implementation,
                                       std::span<const AggregationMetric> metrics,
                                       std::size_t resamples,
                                       std::uint64_t master_seed) {
  auto out = make_replicates(metrics.size(), resamples);
  std::vector<double> buffer;
  for (std::size_t r = 0; r < resamples; ++r) {
    aggregate_replicate(matrix, implementation, metrics, master_seed, r, buffer, out);
  }
  return out;
}

Replicates bootstrap_aggregates_parallel(const ScoreMatrix& matrix,
                                         std::size_t implementation,
                                         std::span<const AggregationMetric> metrics,
                                         std::size_t resamples,
                                         std::uint64_t master_seed) {
  auto out = make_replicates(metrics.size(), resamples);
  const auto n = static_cast<std::int64_t>(resamples);
#pragma omp parallel
  {
    std::vector<double> buffer;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      aggregate_replicate(matrix, implementation, metrics, master_seed,
                          static_cast<std::size_t>(r), buffer, out);
    }
  }
  return out;
}

std::vector<double> bootstrap_poi_serial(const ScoreMatrix& matrix, std::size_t x,
                                         std::size_t y, std::size_t resamples,
                                         std::uint64_t master_seed) {
  std::vector<double> out(resamples);
  PoiBuffers buffers;
  for (std::size_t r = 0; r < resamples; ++r) {
    out[r] = poi_replicate(matrix, x, y, master_seed, r, buffers);
  }
  return out;
}

std::vector<double> bootstrap_poi_parallel(const ScoreMatrix& matrix, std::size_t x,
                                           std::size_t y, std::size_t resamples,
                                           std::uint64_t master_seed) {
  std::vector<double> out(resamples);
  const auto n = static_cast<std::int64_t>(resamples);
#pragma omp parallel
  {
    PoiBuffers buffers;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      out[static_cast<std::size_t>(r)] =
          poi_replicate(matrix, x, y, master_seed, static_cast<std::size_t>(r), buffers);
    }
  }
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace diffrl::kernels
