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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "diffrl/error.hpp"
#include "diffrl/trial_data.hpp"

using namespace diffrl;

namespace {

TrialRecord make_record(std::string impl, std::string env, std::uint32_t trial,
                        std::vector<double> rewards) {
  TrialRecord r;
  r.implementation = std::move(impl);
  r.environment = std::move(env);
  r.trial_index = trial;
  r.episode_rewards = std::move(rewards);
  return r;
}

}  // namespace

TEST_CASE("parse a two-row log") {
  const auto ds = parse_trial_log(
      "implementation,environment,trial,episode,reward\n"
      "sb3,Pong,0,0,3.0\n"
      "sb3,Pong,0,1,4.0\n");
  REQUIRE(ds.size() == 1);
  CHECK(ds.records()[0].episode_rewards == std::vector<double>{3.0, 4.0});
  CHECK(ds.environments() == std::vector<std::string>{"Pong"});
  CHECK(ds.implementations() == std::vector<std::string>{"sb3"});
}

TEST_CASE("ordered sets are lexicographic whatever the row order") {
  const auto ds = parse_trial_log(
      "implementation,environment,trial,episode,reward\n"
      "zeta,Qbert,1,0,1\n"
      "alpha,Breakout,0,0,2\n"
      "zeta,Breakout,0,0,3\r\n"
      "\n"
      "alpha,Qbert,0,0,4\n");
  CHECK(ds.implementations() == std::vector<std::string>{"alpha", "zeta"});
  CHECK(ds.environments() == std::vector<std::string>{"Breakout", "Qbert"});
  CHECK(ds.cell_count("zeta", "Qbert") == 1);
  CHECK(ds.cell_count("alpha", "Pong") == 0);
}

TEST_CASE("duplicate trial key is rejected and named") {
  const std::string log =
      "implementation,environment,trial,episode,reward\n"
      "a,Pong,0,0,1\n"
      "a,Pong,1,0,1\n"
      "a,Pong,0,1,2\n";
  try {
    parse_trial_log(log);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(std::string(e.what()).find("(a, Pong, 0)") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_trial_log("implementation,environment,trial,mean_reward_100\n"
                                  "a,Pong,3,1.5\n"
                                  "a,Pong,3,2.5\n"),
                  ParseError);
}

TEST_CASE("empty input") {
  CHECK_THROWS_WITH_AS(parse_trial_log(""), "empty input", ParseError);
  CHECK_THROWS_WITH_AS(parse_trial_log("  \n\n"), "empty input", ParseError);
  CHECK_THROWS_AS(parse_trial_log("implementation,environment,trial,episode,reward\n"),
                  ParseError);
}

TEST_CASE("malformed rows report their line") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_trial_log(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string header = "implementation,environment,trial,episode,reward\n";
  CHECK(line_of(header + "a,Pong,0,0,1\na,Pong,0,1\n") == 3);
  CHECK(line_of(header + "a,Pong,0,0,abc\n") == 2);
  CHECK(line_of(header + "a,Pong,-1,0,1\n") == 2);
  CHECK(line_of(header + "a,Pong,0,0,nan\n") == 2);
  CHECK(line_of(header + ",Pong,0,0,1\n") == 2);
  CHECK(line_of(header + "a,Pong,0,3,1\na,Pong,0,3,2\n") == 3);
  CHECK(line_of(header + "a,Pong,0,3,1\na,Pong,0,2,2\n") == 3);
  CHECK(line_of("impl,env,trial,episode,reward\n") == 1);
}

TEST_CASE("pre-aggregated format bypasses the episode window") {
  const auto ds = parse_trial_log(
      "implementation,environment,trial,mean_reward_100\n"
      "a,Pong,0,12.5\n");
  REQUIRE(ds.pre_aggregated());
  const auto m = mean_reward_100(ds.records()[0]);
  CHECK(m.value == 12.5);
  CHECK(m.episodes_used == 100);
}

TEST_CASE("mean_reward_100 examples") {
  auto r = make_record("a", "e", 0, std::vector<double>(150, 7.0));
  auto m = mean_reward_100(r);
  CHECK(m.value == 7.0);
  CHECK(m.episodes_used == 100);

  r.episode_rewards.assign(40, 2.0);
  m = mean_reward_100(r);
  CHECK(m.value == 2.0);
  CHECK(m.episodes_used == 40);

  // Oracle: episodes 101..200 sum to 15050.
  r.episode_rewards.resize(200);
  std::iota(r.episode_rewards.begin(), r.episode_rewards.end(), 1.0);
  long double direct = 0.0L;
  for (int v = 101; v <= 200; ++v) direct += v;
  m = mean_reward_100(r);
  CHECK(m.value == static_cast<double>(direct / 100));
  CHECK(m.value == 150.5);
  CHECK(m.episodes_used == 100);
}

TEST_CASE("mean_reward_100 window properties") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> reward(-50.0, 50.0);
  std::uniform_int_distribution<int> length(1, 250);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = make_record("a", "e", 0, {});
    r.episode_rewards.resize(static_cast<std::size_t>(length(gen)));
    for (auto& v : r.episode_rewards) v = reward(gen);
    const auto m = mean_reward_100(r);

    const auto used = std::min<std::size_t>(100, r.episode_rewards.size());
    CHECK(m.episodes_used == used);
    const auto first = r.episode_rewards.end() - static_cast<std::ptrdiff_t>(used);
    const auto [lo, hi] = std::minmax_element(first, r.episode_rewards.end());
    CHECK(m.value >= *lo);
    CHECK(m.value <= *hi);

    // Shuffling inside the window does not change the value.
    auto shuffled = r;
    std::shuffle(shuffled.episode_rewards.end() - static_cast<std::ptrdiff_t>(used),
                 shuffled.episode_rewards.end(), gen);
    CHECK(mean_reward_100(shuffled).value == m.value);

    // Episodes before the window are ignored.
    if (r.episode_rewards.size() > 100) {
      auto changed = r;
      changed.episode_rewards.front() += 1000.0;
      CHECK(mean_reward_100(changed).value == m.value);
    }
  }
}

TEST_CASE("serialize then parse is the identity") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> reward(0.0, 30.0);
  for (int round = 0; round < 20; ++round) {
    std::vector<TrialRecord> records;
    for (const char* impl : {"cleanrl", "sb3", "rllib"}) {
      for (const char* env : {"Pong", "Breakout"}) {
        for (std::uint32_t t = 0; t < 3; ++t) {
          std::vector<double> rewards(static_cast<std::size_t>(1 + gen() % 30));
          for (auto& v : rewards) v = reward(gen);
          records.push_back(make_record(impl, env, t, rewards));
        }
      }
    }
    const TrialDataset ds(records);
    CHECK(parse_trial_log(serialize_trial_log(ds)) == ds);
  }

  const auto aggregated = parse_trial_log(
      "implementation,environment,trial,mean_reward_100\n"
      "a,Pong,0,0.1\n"
      "b,Pong,2,-3e-7\n");
  CHECK(parse_trial_log(serialize_trial_log(aggregated)) == aggregated);
}

TEST_CASE("build_score_matrix") {
  BaselineTable baselines;
  baselines.insert({"Pong", -20.7, 9.3});
  baselines.insert({"Breakout", 1.7, 30.5});

  SUBCASE("human-level trial scores exactly 1") {
    const TrialDataset ds({make_record("a", "Pong", 0, {9.3})});
    const auto m = build_score_matrix(ds, baselines);
    REQUIRE(m.value_count() == 1);
    CHECK(m.cell(0, 0)[0] == 1.0);
  }

  SUBCASE("missing baseline names the environment") {
    const TrialDataset ds({make_record("a", "Qbert", 0, {1.0})});
    try {
      build_score_matrix(ds, baselines);
      FAIL("expected an error");
    } catch (const MissingBaselineError& e) {
      CHECK(e.environment() == "Qbert");
    }
  }

  SUBCASE("degenerate baseline propagates") {
    BaselineTable flat;
    flat.insert({"Pong", 3.0, 3.0});
    const TrialDataset ds({make_record("a", "Pong", 0, {1.0})});
    CHECK_THROWS_AS(build_score_matrix(ds, flat), DegenerateBaselineError);
  }

  SUBCASE("2 envs x 2 impls x 5 trials, cells match scalar normalization") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> reward(-20.0, 40.0);
    std::vector<TrialRecord> records;
    for (const char* impl : {"x", "y"}) {
      for (const char* env : {"Pong", "Breakout"}) {
        for (std::uint32_t t = 0; t < 5; ++t) {
          std::vector<double> rewards(120);
          for (auto& v : rewards) v = reward(gen);
          records.push_back(make_record(impl, env, t, rewards));
        }
      }
    }
    const TrialDataset ds(records);
    const auto m = build_score_matrix(ds, baselines);
    CHECK(m.populated_cells() == 4);
    CHECK(m.value_count() == 20);
    CHECK(m.strata() == std::vector<std::string>{"Breakout", "Pong"});
    for (const auto& r : ds.records()) {
      // Scalar oracle: plain average of the last 100 then the min-max formula.
      long double sum = 0.0L;
      for (std::size_t e = 20; e < 120; ++e) sum += r.episode_rewards[e];
      const auto& b = *baselines.find(r.environment);
      const double expected = static_cast<double>(
          (sum / 100 - b.random_play) / (b.human_play - b.random_play));
      const auto s = *m.stratum_index(r.environment);
      const auto i = *m.implementation_index(r.implementation);
      CHECK(m.cell(s, i)[r.trial_index] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("unequal cell sizes are kept") {
  const TrialDataset ds({make_record("a", "e", 0, {1}), make_record("a", "e", 1, {2}),
                         make_record("b", "e", 0, {3})});
  const auto m = build_mean_reward_matrix(ds);
  CHECK(m.cell_size(0, 0) == 2);
  CHECK(m.cell_size(0, 1) == 1);
  CHECK(m.cell(0, 0)[1] == 2.0);
}

TEST_CASE("select keeps the named implementations") {
  const TrialDataset ds({make_record("a", "e", 0, {1}), make_record("b", "e", 0, {2}),
                         make_record("c", "f", 0, {3})});
  const std::vector<std::string> keep{"c", "a"};
  const auto sub = ds.select(keep);
  CHECK(sub.implementations() == std::vector<std::string>{"a", "c"});
  CHECK(sub.environments() == std::vector<std::string>{"e", "f"});
  const std::vector<std::string> unknown{"zzz"};
  CHECK_THROWS_AS(ds.select(unknown), Error);
}
