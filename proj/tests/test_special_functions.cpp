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
#include <limits>
#include <random>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "diffrl/error.hpp"
#include "diffrl/hypothesis.hpp"
#include "diffrl/special_functions.hpp"

using namespace diffrl;

TEST_CASE("F survival function edge cases") {
  CHECK(f_distribution_sf(0.0, 3, 7) == 1.0);
  CHECK(f_distribution_sf(std::numeric_limits<double>::infinity(), 3, 7) == 0.0);
  CHECK(f_distribution_sf(1e12, 3, 7) < 1e-12);
  for (int d : {1, 2, 5, 17, 60}) {
    CHECK(f_distribution_sf(1.0, d, d) == doctest::Approx(0.5).epsilon(1e-13));
  }
  CHECK_THROWS_AS(f_distribution_sf(1.0, 0, 3), Error);
  CHECK_THROWS_AS(f_distribution_sf(-1.0, 2, 3), Error);
  CHECK_THROWS_AS(f_distribution_sf(std::nan(""), 2, 3), Error);
}

TEST_CASE("F survival function against 25-digit values") {
  // mpmath betainc, 40-digit working precision.
  struct Row {
    double f;
    int d1, d2;
    double p;
  };
  const Row rows[] = {
      {0.5, 1, 1, 0.6081734479693927298291444},
      {2.5, 3, 7, 0.1435094562789392217206249},
      {9.0, 2, 30, 0.0008673617379884035472059622},
      {0.1, 10, 3, 0.9976484206666850626245774},
      {4.2, 4, 100, 0.003477252155817462036943811},
      {30.0, 1, 2, 0.03175416344814577870518365},
      {0.001, 7, 9, 0.999999999513552977378355},
      {100.0, 6, 6, 0.000009562325307016586063376217},
      {3.3, 20, 40, 0.0006419737991787393387636911},
      {3875.0 / 377.0, 2, 15, 0.001544341819957785692853514},
  };
  for (const auto& row : rows) {
    CAPTURE(row.f);
    CHECK(std::abs(f_distribution_sf(row.f, row.d1, row.d2) - row.p) < 1e-12);
  }
}

TEST_CASE("F survival function agrees with Boost on a grid") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> log_f(-4.0, 4.0);
  std::uniform_int_distribution<int> df(1, 300);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double f = std::pow(10.0, log_f(gen));
    const int d1 = df(gen);
    const int d2 = df(gen);
    const double expected =
        boost::math::cdf(boost::math::complement(boost::math::fisher_f(d1, d2), f));
    worst = std::max(worst, std::abs(f_distribution_sf(f, d1, d2) - expected));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("incomplete beta against Boost") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> shape(0.05, 80.0);
  std::uniform_real_distribution<double> x(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = shape(gen);
    const double b = shape(gen);
    const double xv = x(gen);
    CHECK(std::abs(regularized_incomplete_beta(a, b, xv) - boost::math::ibeta(a, b, xv)) <
          1e-10);
  }
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK(regularized_incomplete_beta(1.0, 1.0, 0.8) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), Error);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), Error);
}

TEST_CASE("normal quantile") {
  struct Row {
    double p, z;
  };
  // sqrt(2) * erfinv(2p - 1) from mpmath.
  const Row rows[] = {{1e-10, -6.361340902404056199100397},
                      {0.001, -3.090232306167813535358005},
                      {0.02, -2.053748910631823044338639},
                      {0.3, -0.5244005127080408159694544},
                      {0.5, 0.0},
                      {0.77, 0.7388468491852136878217442},
                      {0.975, 1.959963984540053855604431},
                      {0.999999, 4.753424308817087765688097}};
  for (const auto& row : rows) {
    CAPTURE(row.p);
    CHECK(std::abs(normal_quantile(row.p) - row.z) < 1e-12 * std::max(1.0, std::abs(row.z)));
  }
  const boost::math::normal standard;
  for (double p = 1e-6; p < 1.0; p += 0.0137) {
    CHECK(std::abs(normal_quantile(p) - boost::math::quantile(standard, p)) < 1e-12);
  }
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isinf(normal_quantile(1.0)));
  CHECK(normal_cdf(1.0 / std::sqrt(2.0)) ==
        doctest::Approx(0.7602499389065232688413733).epsilon(1e-14));
}
