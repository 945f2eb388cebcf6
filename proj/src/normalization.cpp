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

#include "diffrl/normalization.hpp"

#include <istream>
#include <sstream>

#include "diffrl/error.hpp"
#include "text_io.hpp"

namespace diffrl {

void BaselineTable::insert(BaselineEntry entry) {
  if (entries_.contains(entry.environment)) {
    throw Error("duplicate baseline for environment '" + entry.environment + "'");
  }
  auto key = entry.environment;
  entries_.emplace(std::move(key), std::move(entry));
}

const BaselineEntry* BaselineTable::find(std::string_view environment) const {
  const auto it = entries_.find(environment);
  return it == entries_.end() ? nullptr : &it->second;
}

const BaselineEntry& BaselineTable::at(std::string_view environment) const {
  if (const auto* entry = find(environment)) return *entry;
  throw MissingBaselineError(std::string(environment));
}

NormalizedScore normalize_score(double mean_reward, const BaselineEntry& baseline) {
  const double span = baseline.human_play - baseline.random_play;
  if (span == 0.0) throw DegenerateBaselineError(baseline.environment);
  return {(mean_reward - baseline.random_play) / span};
}

BaselineTable load_baseline_table(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(0, "empty input");

  const auto header = detail::split_fields(lines.front().text);
  if (header != std::vector<std::string_view>{"environment", "random_play", "human_play"}) {
    throw ParseError(lines.front().number,
                     "expected header 'environment,random_play,human_play'");
  }

  BaselineTable table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto fields = detail::split_fields(line.text);
    if (fields.size() != 3) throw ParseError(line.number, "expected 3 fields");
    if (fields[0].empty()) throw ParseError(line.number, "empty environment");
    const auto random_play = detail::parse_real(fields[1]);
    const auto human_play = detail::parse_real(fields[2]);
    if (!random_play) throw ParseError(line.number, "bad random_play value");
    if (!human_play) throw ParseError(line.number, "bad human_play value");
    try {
      table.insert({std::string(fields[0]), *random_play, *human_play});
    } catch (const Error& e) {
      throw ParseError(line.number, e.what());
    }
  }
  return table;
}

BaselineTable load_baseline_table(std::istream& in) {
  return load_baseline_table(detail::read_all(in));
}

std::string serialize_baseline_table(const BaselineTable& table) {
  std::ostringstream out;
  out << "environment,random_play,human_play\n";
  for (const auto& [name, entry] : table) {
    out << name << ',' << detail::format_real(entry.random_play) << ','
        << detail::format_real(entry.human_play) << '\n';
  }
  return out.str();
}

}  // namespace diffrl
