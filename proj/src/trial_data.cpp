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

#include "diffrl/trial_data.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include "diffrl/error.hpp"
#include "text_io.hpp"

namespace diffrl {

namespace {

constexpr std::size_t kWindow = 100;

const std::vector<std::string_view> kEpisodeHeader = {
    "implementation", "environment", "trial", "episode", "reward"};
const std::vector<std::string_view> kAggregateHeader = {
    "implementation", "environment", "trial", "mean_reward_100"};

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct RowKey {
  std::string_view implementation;
  std::string_view environment;
  std::uint32_t trial;
};

RowKey parse_key(const detail::Line& line, std::span<const std::string_view> fields) {
  if (fields[0].empty()) throw ParseError(line.number, "empty implementation");
  if (fields[1].empty()) throw ParseError(line.number, "empty environment");
  const auto trial = detail::parse_unsigned(fields[2]);
  if (!trial || *trial > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError(line.number, "bad trial index '" + std::string(fields[2]) + "'");
  }
  return {fields[0], fields[1], static_cast<std::uint32_t>(*trial)};
}

TrialDataset parse_episode_rows(std::span<const detail::Line> rows) {
  std::vector<TrialRecord> records;
  std::set<TrialKey> seen;
  std::uint64_t last_episode = 0;

  for (const auto& line : rows) {
    const auto fields = detail::split_fields(line.text);
    if (fields.size() != 5) throw ParseError(line.number, "expected 5 fields");
    const auto key = parse_key(line, fields);
    const auto episode = detail::parse_unsigned(fields[3]);
    if (!episode) {
      throw ParseError(line.number, "bad episode index '" + std::string(fields[3]) + "'");
    }
    const auto reward = detail::parse_real(fields[4]);
    if (!reward) {
      throw ParseError(line.number, "bad reward '" + std::string(fields[4]) + "'");
    }

    const bool continues = !records.empty() &&
                           records.back().implementation == key.implementation &&
                           records.back().environment == key.environment &&
                           records.back().trial_index == key.trial;
    if (continues) {
      if (*episode <= last_episode) {
        throw ParseError(line.number, "episode index not strictly increasing");
      }
    } else {
      TrialRecord record;
      record.implementation = key.implementation;
      record.environment = key.environment;
      record.trial_index = key.trial;
      if (!seen.insert(record.key()).second) {
        throw ParseError(line.number, "duplicate trial key " + record.key().to_string());
      }
      records.push_back(std::move(record));
    }
    last_episode = *episode;
    records.back().episode_rewards.push_back(*reward);
  }
  return TrialDataset(std::move(records));
}

TrialDataset parse_aggregate_rows(std::span<const detail::Line> rows) {
  std::vector<TrialRecord> records;
  std::set<TrialKey> seen;
  for (const auto& line : rows) {
    const auto fields = detail::split_fields(line.text);
    if (fields.size() != 4) throw ParseError(line.number, "expected 4 fields");
    const auto key = parse_key(line, fields);
    const auto value = detail::parse_real(fields[3]);
    if (!value) {
      throw ParseError(line.number, "bad mean_reward_100 '" + std::string(fields[3]) + "'");
    }
    TrialRecord record;
    record.implementation = key.implementation;
    record.environment = key.environment;
    record.trial_index = key.trial;
    record.reported_mean_reward_100 = *value;
    if (!seen.insert(record.key()).second) {
      throw ParseError(line.number, "duplicate trial key " + record.key().to_string());
    }
    records.push_back(std::move(record));
  }
  return TrialDataset(std::move(records));
}

}  // namespace

std::string TrialKey::to_string() const {
  return "(" + implementation + ", " + environment + ", " +
         std::to_string(trial_index) + ")";
}

TrialDataset::TrialDataset(std::vector<TrialRecord> records)
    : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.key() < b.key(); });
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (i > 0 && records_[i - 1].key() == r.key()) {
      throw Error("duplicate trial key " + r.key().to_string());
    }
    if (r.implementation.empty() || r.environment.empty()) {
      throw Error("trial " + r.key().to_string() + " has an empty identifier");
    }
    if (r.episode_rewards.empty() && !r.reported_mean_reward_100) {
      throw Error("trial " + r.key().to_string() + " has no episodes");
    }
    implementations_.push_back(r.implementation);
    environments_.push_back(r.environment);
  }
  implementations_ = sorted_unique(std::move(implementations_));
  environments_ = sorted_unique(std::move(environments_));
}

std::size_t TrialDataset::cell_count(std::string_view implementation,
                                     std::string_view environment) const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [&](const TrialRecord& r) {
        return r.implementation == implementation && r.environment == environment;
      }));
}

const TrialRecord* TrialDataset::find(const TrialKey& key) const {
  const auto it = std::lower_bound(
      records_.begin(), records_.end(), key,
      [](const TrialRecord& r, const TrialKey& k) { return r.key() < k; });
  if (it == records_.end() || it->key() != key) return nullptr;
  return &*it;
}

bool TrialDataset::pre_aggregated() const {
  return !records_.empty() &&
         std::all_of(records_.begin(), records_.end(), [](const TrialRecord& r) {
           return r.reported_mean_reward_100.has_value();
         });
}

TrialDataset TrialDataset::select(std::span<const std::string> implementations) const {
  for (const auto& name : implementations) {
    if (!std::binary_search(implementations_.begin(), implementations_.end(), name)) {
      throw Error("unknown implementation '" + name + "'");
    }
  }
  std::vector<TrialRecord> kept;
  for (const auto& r : records_) {
    if (std::find(implementations.begin(), implementations.end(), r.implementation) !=
        implementations.end()) {
      kept.push_back(r);
    }
  }
  return TrialDataset(std::move(kept));
}

TrialDataset parse_trial_log(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(0, "empty input");

  const auto header = detail::split_fields(lines.front().text);
  const std::span<const detail::Line> rows(lines.begin() + 1, lines.end());
  if (header == kEpisodeHeader) {
    if (rows.empty()) throw ParseError(lines.front().number, "no trial rows after header");
    return parse_episode_rows(rows);
  }
  if (header == kAggregateHeader) {
    if (rows.empty()) throw ParseError(lines.front().number, "no trial rows after header");
    return parse_aggregate_rows(rows);
  }
  throw ParseError(lines.front().number,
                   "unrecognized header; expected "
                   "'implementation,environment,trial,episode,reward' or "
                   "'implementation,environment,trial,mean_reward_100'");
}

TrialDataset parse_trial_log(std::istream& in) {
  return parse_trial_log(detail::read_all(in));
}

void write_trial_log(std::ostream& out, const TrialDataset& dataset) {
  if (dataset.pre_aggregated()) {
    out << "implementation,environment,trial,mean_reward_100\n";
    for (const auto& r : dataset.records()) {
      out << r.implementation << ',' << r.environment << ',' << r.trial_index << ','
          << detail::format_real(*r.reported_mean_reward_100) << '\n';
    }
    return;
  }
  for (const auto& r : dataset.records()) {
    if (r.episode_rewards.empty()) {
      throw Error("cannot write pre-aggregated trial " + r.key().to_string() +
                  " in the per-episode format");
    }
  }
  out << "implementation,environment,trial,episode,reward\n";
  for (const auto& r : dataset.records()) {
    for (std::size_t e = 0; e < r.episode_rewards.size(); ++e) {
      out << r.implementation << ',' << r.environment << ',' << r.trial_index << ','
          << e << ',' << detail::format_real(r.episode_rewards[e]) << '\n';
    }
  }
}

std::string serialize_trial_log(const TrialDataset& dataset) {
  std::ostringstream out;
  write_trial_log(out, dataset);
  return out.str();
}

MeanReward100 mean_reward_100(const TrialRecord& record) {
  if (record.reported_mean_reward_100) {
    return {*record.reported_mean_reward_100, kWindow};
  }
  const auto& rewards = record.episode_rewards;
  if (rewards.empty()) throw Error("trial " + record.key().to_string() + " has no episodes");

  const std::size_t used = std::min(kWindow, rewards.size());
  std::vector<double> window(rewards.end() - static_cast<std::ptrdiff_t>(used),
                             rewards.end());
  // Summing in sorted order makes the result independent of the order of
  // episodes inside the window.
  std::sort(window.begin(), window.end());
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : window) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  const double mean = (sum + compensation) / static_cast<double>(used);
  return {std::clamp(mean, window.front(), window.back()), used};
}

namespace {

template <typename ValueOf>
ScoreMatrix build_matrix(const TrialDataset& dataset, ValueOf value_of) {
  ScoreMatrix matrix(dataset.environments(), dataset.implementations());
  for (const auto& r : dataset.records()) {
    // Records are sorted by trial within each cell, so cells come out ordered.
    const auto s = *matrix.stratum_index(r.environment);
    const auto i = *matrix.implementation_index(r.implementation);
    matrix.append(s, i, value_of(r));
  }
  return matrix;
}

}  // namespace

ScoreMatrix build_score_matrix(const TrialDataset& dataset,
                               const BaselineTable& baselines) {
  for (const auto& env : dataset.environments()) baselines.at(env);
  return build_matrix(dataset, [&](const TrialRecord& r) {
    return normalize_score(mean_reward_100(r).value, baselines.at(r.environment)).value;
  });
}

ScoreMatrix build_mean_reward_matrix(const TrialDataset& dataset) {
  return build_matrix(dataset,
                      [](const TrialRecord& r) { return mean_reward_100(r).value; });
}

}  // namespace diffrl
