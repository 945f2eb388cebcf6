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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "diffrl/bootstrap.hpp"
#include "diffrl/hypothesis.hpp"
#include "diffrl/report.hpp"
#include "diffrl/trial_data.hpp"

namespace diffrl {

/// implementation,environment,episode,trials,mean,min,max
/// One row per episode position, over the trials that reached it.
/// Pre-aggregated records contribute nothing.
std::string curve_table(const TrialDataset& dataset);

/// implementation,tau,point,ci_lower,ci_upper,confidence
std::string profile_table(const PerformanceProfile& profile);

/// x,y,point,ci_lower,ci_upper,confidence,significant,meaningful,better
std::string poi_table(std::span<const PoiResult> results);

/// Writes curves.csv, and profile.csv / poi.csv when the report has them.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const ComparisonReport& report,
                                                  const TrialDataset& dataset,
                                                  const std::filesystem::path& dir);

}  // namespace diffrl
