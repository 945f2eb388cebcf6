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

#include <cmath>
#include <json.hpp>

#include "diffrl/error.hpp"
#include "diffrl/hypothesis.hpp"
#include "diffrl/synthetic.hpp"

using namespace diffrl;

namespace {

SyntheticImplSpec make_spec(std::string name, std::map<std::string, RewardModel, std::less<>> envs,
                            std::size_t episodes, std::size_t trials) {
  SyntheticImplSpec spec;
  spec.implementation = std::move(name);
  spec.environments = std::move(envs);
  spec.episodes_per_trial = episodes;
  spec.trials = trials;
  return spec;
}

}  // namespace

TEST_CASE("constant and zero-noise models produce exact rewards") {
  const std::vector<SyntheticImplSpec> specs{
      make_spec("a", {{"Pong", ConstantModel{5.0}}}, 10, 3),
      make_spec("b", {{"Pong", NormalModel{10.0, 0.0}}}, 7, 2)};
  const auto data = generate_synthetic_trials(specs, 42);
  REQUIRE(data.records().size() == 5);
  for (const auto& r : data.records()) {
    const double expected = r.implementation == "a" ? 5.0 : 10.0;
    CHECK(r.episode_rewards.size() == (r.implementation == "a" ? 10u : 7u));
    for (double v : r.episode_rewards) CHECK(v == expected);
    CHECK(mean_reward_100(r).value == expected);
  }
}

TEST_CASE("generation is deterministic and independent of execution mode") {
  const std::vector<SyntheticImplSpec> specs{
      make_spec("a", {{"Pong", NormalModel{1.0, 2.0}}, {"Breakout", UniformModel{0.0, 3.0}}}, 30, 4),
      make_spec("b", {{"Pong", LearningCurveModel{0, 5, 10, 2, 0.5}}, {"Breakout", ConstantModel{1}}},
                30, 4)};
  const auto first = generate_synthetic_trials(specs, 7);
  const auto again = generate_synthetic_trials(specs, 7);
  const auto serial = generate_synthetic_trials(specs, 7, Execution::serial);
  CHECK(serialize_trial_log(first) == serialize_trial_log(again));
  CHECK(serialize_trial_log(first) == serialize_trial_log(serial));
  CHECK(serialize_trial_log(first) != serialize_trial_log(generate_synthetic_trials(specs, 8)));

  // Adding an implementation leaves the other implementations' draws alone.
  auto extended = specs;
  extended.push_back(make_spec("c", {{"Pong", ConstantModel{0}}, {"Breakout", ConstantModel{0}}}, 3, 1));
  const auto bigger = generate_synthetic_trials(extended, 7);
  CHECK(serialize_trial_log(bigger.select(std::vector<std::string>{"a", "b"})) == serialize_trial_log(first));
}

TEST_CASE("mismatched environment sets are rejected") {
  const std::vector<SyntheticImplSpec> specs{
      make_spec("a", {{"Pong", ConstantModel{1.0}}}, 1, 1),
      make_spec("b", {{"Breakout", ConstantModel{1.0}}}, 1, 1)};
  CHECK_THROWS_AS(generate_synthetic_trials(specs, 0), Error);
}

TEST_CASE("uniform draws stay in range") {
  const std::vector<SyntheticImplSpec> specs{make_spec("a", {{"E", UniformModel{-1.0, 2.0}}}, 500, 3)};
  for (const auto& r : generate_synthetic_trials(specs, 3).records()) {
    for (double v : r.episode_rewards) {
      CHECK(v >= -1.0);
      CHECK(v < 2.0);
    }
  }
}

TEST_CASE("analytic_poi") {
  CHECK(analytic_poi(NormalModel{0, 1}, NormalModel{0, 1}) == 0.5);
  CHECK(analytic_poi(NormalModel{1, 1}, NormalModel{0, 1}) ==
        doctest::Approx(0.7602499389065232688413733).epsilon(1e-14));
  CHECK(analytic_poi(ConstantModel{2}, ConstantModel{1}) == 1.0);
  CHECK(analytic_poi(ConstantModel{1}, ConstantModel{2}) == 0.0);
  CHECK(analytic_poi(ConstantModel{1}, ConstantModel{1}) == 0.5);
  CHECK(analytic_poi(ConstantModel{0}, NormalModel{0, 3}) == 0.5);
  CHECK_THROWS_AS(analytic_poi(UniformModel{0, 1}, NormalModel{0, 1}), Error);
}

TEST_CASE("empirical POI converges to the analytic value") {
  const std::vector<SyntheticImplSpec> specs{make_spec("x", {{"E", NormalModel{1, 1}}}, 1, 10000),
                                             make_spec("y", {{"E", NormalModel{0, 1}}}, 1, 10000)};
  const auto data = generate_synthetic_trials(specs, 2026);
  const auto m = build_mean_reward_matrix(data);
  const double empirical = poi_env(m.cell(0, 0), m.cell(0, 1));
  CHECK(std::abs(empirical - analytic_poi(NormalModel{1, 1}, NormalModel{0, 1})) < 0.02);
}

TEST_CASE("noise-free learning curve matches its closed form") {
  const LearningCurveModel curve{-2.0, 8.0, 60.0, 9.0, 0.0};
  const std::vector<SyntheticImplSpec> specs{make_spec("a", {{"E", curve}}, 250, 2)};
  const auto data = generate_synthetic_trials(specs, 1);
  long double sum = 0.0L;
  for (int e = 150; e < 250; ++e) {
    sum += -2.0L + 10.0L / (1.0L + std::exp(-(static_cast<long double>(e) - 60.0L) / 9.0L));
  }
  const double expected = static_cast<double>(sum / 100.0L);
  for (const auto& r : data.records()) {
    for (int e = 0; e < 250; ++e) {
      const double closed = -2.0 + 10.0 / (1.0 + std::exp(-(e - 60.0) / 9.0));
      CHECK(r.episode_rewards[static_cast<std::size_t>(e)] == doctest::Approx(closed).epsilon(1e-14));
    }
    const auto m = mean_reward_100(r);
    CHECK(m.episodes_used == 100);
    CHECK(m.value == doctest::Approx(expected).epsilon(1e-13));
  }
  const auto dist = trial_score_distribution(curve, 250);
  CHECK(dist.mean == doctest::Approx(expected).epsilon(1e-13));
  CHECK(dist.sd == 0.0);
}

TEST_CASE("trial score distribution") {
  const auto d = trial_score_distribution(NormalModel{3.0, 2.0}, 400);
  CHECK(d.mean == 3.0);
  CHECK(d.sd == doctest::Approx(0.2));
  const auto single = trial_score_distribution(NormalModel{3.0, 2.0}, 1);
  CHECK(single.sd == 2.0);
  const auto u = trial_score_distribution(UniformModel{0.0, 1.0}, 1);
  CHECK(u.mean == 0.5);
  CHECK_FALSE(u.normal);
  CHECK_THROWS_AS(trial_score_distribution(ConstantModel{1}, 0), Error);
}

TEST_CASE("constant suites give degenerate intervals end to end") {
  const std::vector<SyntheticImplSpec> specs{
      make_spec("a", {{"E1", ConstantModel{3.0}}, {"E2", ConstantModel{1.0}}}, 5, 4),
      make_spec("b", {{"E1", ConstantModel{2.0}}, {"E2", ConstantModel{1.0}}}, 5, 4)};
  const auto m = build_mean_reward_matrix(generate_synthetic_trials(specs, 5));
  BootstrapOptions options;
  options.resamples = 200;
  const auto e = sbci(m, "a", AggregationMetric::mean(), options);
  CHECK(e.point == 2.0);
  CHECK(e.ci_lower == 2.0);
  CHECK(e.ci_upper == 2.0);
  const auto p = poi_with_ci(m, "a", "b", options);
  CHECK(p.estimate.point == 0.75);
  CHECK(p.estimate.ci_lower == 0.75);
  CHECK(p.estimate.ci_upper == 0.75);
}

TEST_CASE("parse_synthetic_spec") {
  const std::string good = R"({
    "schema": "diffrl-synth/1",
    "baselines": {"Pong": {"random_play": -20.7, "human_play": 9.3}},
    "implementations": [
      {"name": "a", "episodes_per_trial": 100, "trials": 5,
       "environments": {"Pong": {"model": "normal", "mu": 0.0, "sigma": 3.0}}},
      {"name": "b", "episodes_per_trial": 200, "trials": 3,
       "environments": {"Pong": {"model": "learning_curve", "start": -20, "plateau": 10,
                                 "ramp_midpoint": 50, "ramp_width": 5, "noise_sigma": 1}}}
    ]})";
  const auto suite = parse_synthetic_spec(good);
  REQUIRE(suite.implementations.size() == 2);
  CHECK(suite.implementations[1].episodes_per_trial == 200);
  CHECK(std::holds_alternative<LearningCurveModel>(suite.implementations[1].environments.at("Pong")));
  CHECK(suite.baselines.at("Pong").human_play == 9.3);

  auto fails_with = [](const std::string& text, const std::string& fragment) {
    try {
      parse_synthetic_spec(text);
    } catch (const ParseError& e) {
      const std::string what = e.what();
      CAPTURE(what);
      CHECK(what.find(fragment) != std::string::npos);
      return;
    }
    FAIL("expected a parse error");
  };
  fails_with("{", "line 1");
  fails_with(R"({"implementations": []})", "$.implementations");
  fails_with(R"({"implementations": [{"name": "a", "episodes_per_trial": 0, "trials": 1,
      "environments": {"E": {"model": "constant", "value": 1}}}]})",
             "$.implementations[0].episodes_per_trial");
  fails_with(R"({"implementations": [{"name": "a", "episodes_per_trial": 1, "trials": 1,
      "environments": {"E": {"model": "normal", "mu": 1, "sigma": -1}}}]})",
             "$.implementations[0].environments.E");
  fails_with(R"({"implementations": [{"name": "a", "episodes_per_trial": 1, "trials": 1,
      "environments": {"E": {"model": "gamma"}}}]})",
             "unknown model 'gamma'");
  fails_with(R"({"implementations": [
      {"name": "a", "episodes_per_trial": 1, "trials": 1, "environments": {"E": {"model": "constant", "value": 1}}},
      {"name": "b", "episodes_per_trial": 1, "trials": 1, "environments": {"F": {"model": "constant", "value": 1}}}]})",
             "inconsistent environment sets");
  fails_with(R"({"schema": "other", "implementations": []})", "$.schema");
}

TEST_CASE("truth document") {
  const auto suite = parse_synthetic_spec(R"({
    "baselines": {"E": {"random_play": 0, "human_play": 10}},
    "implementations": [
      {"name": "a", "episodes_per_trial": 1, "trials": 5,
       "environments": {"E": {"model": "normal", "mu": 15, "sigma": 10}}},
      {"name": "b", "episodes_per_trial": 1, "trials": 5,
       "environments": {"E": {"model": "normal", "mu": 5, "sigma": 10}}}]})");
  const auto truth = nlohmann::json::parse(synthetic_truth_json(suite));
  CHECK(truth["schema"] == "diffrl-synth-truth/1");
  REQUIRE(truth["implementations"][0]["name"] == "a");
  const auto a = truth["implementations"][0]["environments"]["E"];
  CHECK(a["normalized_score"]["mean"].get<double>() == doctest::Approx(1.5));
  CHECK(a["normalized_score"]["sd"].get<double>() == doctest::Approx(1.0));
  CHECK(a["normalized_score"]["superhuman_probability"].get<double>() ==
        doctest::Approx(0.6914624612740131).epsilon(1e-12));
  bool found = false;
  for (const auto& pair : truth["pairwise_poi"]) {
    if (pair["x"] == "a" && pair["y"] == "b") {
      found = true;
      CHECK(pair["overall"].get<double>() ==
            doctest::Approx(0.7602499389065232688413733).epsilon(1e-12));
    }
  }
  CHECK(found);
}
