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

// Bootstrap replicate kernels. Each has a serial reference and an OpenMP
// version; both evaluate every replicate with the same code path and the
// same counter-based stream, so their outputs are bit-identical.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "diffrl/bootstrap.hpp"
#include "diffrl/score_matrix.hpp"

namespace diffrl::kernels {

/// replicates[m][r] = aggregate of resample r under metrics[m].
using Replicates = std::vector<std::vector<double>>;

Replicates bootstrap_aggregates_serial(const ScoreMatrix& matrix,
                                       std::size_t implementation,
                                       std::span<const AggregationMetric> metrics,
                                       std::size_t resamples,
                                       std::uint64_t master_seed);

Replicates bootstrap_aggregates_parallel(const ScoreMatrix& matrix,
                                         std::size_t implementation,
                                         std::span<const AggregationMetric> metrics,
                                         std::size_t resamples,
                                         std::uint64_t master_seed);

/// Overall POI of x over y on each resample. x and y are resampled with
/// their own streams, the same ones the aggregate kernels use.
std::vector<double> bootstrap_poi_serial(const ScoreMatrix& matrix, std::size_t x,
                                         std::size_t y, std::size_t resamples,
                                         std::uint64_t master_seed);

std::vector<double> bootstrap_poi_parallel(const ScoreMatrix& matrix, std::size_t x,
                                           std::size_t y, std::size_t resamples,
                                           std::uint64_t master_seed);

/// Number of threads the parallel kernels would use (1 without OpenMP).
int max_threads();

}  // namespace diffrl::kernels
