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

#include "diffrl/plot_data.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "diffrl/error.hpp"
#include "resample_detail.hpp"
#include "text_io.hpp"

namespace diffrl {

using detail::format_real;

std::string curve_table(const TrialDataset& dataset) {
  std::ostringstream out;
  out << "implementation,environment,episode,trials,mean,min,max\n";
  const auto records = dataset.records();
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() &&
           records[end].implementation == records[begin].implementation &&
           records[end].environment == records[begin].environment) {
      ++end;
    }
    std::size_t longest = 0;
    for (std::size_t r = begin; r < end; ++r) {
      longest = std::max(longest, records[r].episode_rewards.size());
    }
    std::vector<double> values;
    for (std::size_t e = 0; e < longest; ++e) {
      values.clear();
      for (std::size_t r = begin; r < end; ++r) {
        const auto& rewards = records[r].episode_rewards;
        if (e < rewards.size()) values.push_back(rewards[e]);
      }
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      out << records[begin].implementation << ',' << records[begin].environment << ',' << e
          << ',' << values.size() << ',' << format_real(detail::bounded_mean(values)) << ','
          << format_real(*lo) << ',' << format_real(*hi) << '\n';
    }
    begin = end;
  }
  return out.str();
}

std::string profile_table(const PerformanceProfile& profile) {
  std::ostringstream out;
  out << "implementation,tau,point,ci_lower,ci_upper,confidence\n";
  for (std::size_t i = 0; i < profile.implementations.size(); ++i) {
    for (std::size_t t = 0; t < profile.tau_grid.size(); ++t) {
      const auto& e = profile.curves[i][t];
      out << profile.implementations[i] << ',' << format_real(profile.tau_grid[t]) << ','
          << format_real(e.point) << ',' << format_real(e.ci_lower) << ','
          << format_real(e.ci_upper) << ',' << format_real(e.confidence) << '\n';
    }
  }
  return out.str();
}

std::string poi_table(std::span<const PoiResult> results) {
  std::ostringstream out;
  out << "x,y,point,ci_lower,ci_upper,confidence,significant,meaningful,better\n";
  for (const auto& p : results) {
    out << p.x_implementation << ',' << p.y_implementation << ','
        << format_real(p.estimate.point) << ',' << format_real(p.estimate.ci_lower) << ','
        << format_real(p.estimate.ci_upper) << ',' << format_real(p.estimate.confidence)
        << ',' << (p.significant ? "true" : "false") << ','
        << (p.meaningful ? "true" : "false") << ',' << (p.better ? "true" : "false") << '\n';
  }
  return out.str();
}

namespace {
void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}
}  // namespace

std::vector<std::filesystem::path> emit_plot_data(const ComparisonReport& report,
                                                  const TrialDataset& dataset,
                                                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  written.push_back(dir / "curves.csv");
  write_file(written.back(), curve_table(dataset));
  if (report.profile) {
    written.push_back(dir / "profile.csv");
    write_file(written.back(), profile_table(*report.profile));
  }
  if (!report.poi.empty()) {
    written.push_back(dir / "poi.csv");
    write_file(written.back(), poi_table(report.poi));
  }
  return written;
}

}  // namespace diffrl
