// Copyright 2026 The ouqnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <sstream>

#include "doctest.h"
#include "ouq/error.hpp"
#include "ouq/measures.hpp"

namespace ouq {
namespace {

DiscreteMeasure TwoPoint() { return DiscreteMeasure(1, {0.2, 0.8}, {0.5, 0.5}); }

TEST_CASE("dirac membership is half-open") {
  CHECK(dirac_membership(0.5, 0.4));
  CHECK_FALSE(dirac_membership(0.39, 0.4));
  CHECK(dirac_membership(0.4, 0.4));
  CHECK_FALSE(dirac_membership(0.7, 0.4, 0.7));
}

TEST_CASE("expectation") {
  const auto first = [](PointView x) { return x[0]; };
  CHECK(expectation(DiscreteMeasure::dirac({0.3}), first) == doctest::Approx(0.3));
  CHECK(expectation(TwoPoint(), first) == doctest::Approx(0.5));
  CHECK(expectation(TwoPoint(), [](PointView x) { return x[0] * x[0]; }) ==
        doctest::Approx(0.34));
  CHECK_THROWS_AS(expectation(TwoPoint(), [](PointView) { return std::nan(""); }),
                  NumericError);
}

TEST_CASE("pof under a measure") {
  CHECK(pof_under_measure(TwoPoint(), [](PointView) { return true; }) == 1.0);
  CHECK(pof_under_measure(TwoPoint(), [](PointView) { return false; }) == 0.0);
  const DiscreteMeasure m(1, {0.1, 0.9}, {0.3, 0.7});
  CHECK(pof_under_measure(m, [](PointView x) { return x[0] < 0.5; }) == doctest::Approx(0.3));
}

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(DiscreteMeasure(1, {0.2, 0.8}, {0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure(1, {0.2, 0.8}, {1.5, -0.5}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure(1, {0.2, 1.2}, {0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure(2, {0.2, 0.3, 0.4}, {0.5, 0.5}), InvalidArgument);
  CHECK(TwoPoint().within_support_bound(1));
  CHECK_FALSE(TwoPoint().within_support_bound(0));
}

TEST_CASE("simplex projection examples") {
  CHECK(project_to_simplex(std::vector<double>{0.5, 0.5}) == std::vector<double>{0.5, 0.5});
  CHECK(project_to_simplex(std::vector<double>{2, 0}) == std::vector<double>{1, 0});
  const auto p = project_to_simplex(std::vector<double>{0.6, 0.6});
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(project_to_simplex(std::vector<double>{std::nan(""), 1}), NumericError);
  CHECK_THROWS_AS(project_to_simplex(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("simplex projection matches a brute-force minimizer") {
  // Minimize |t - v|^2 over t = (a, 1 - a) on a fine grid of a in [0,1].
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> raw(-2.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double v0 = trial == 0 ? 0.6 : raw(rng);
    const double v1 = trial == 0 ? 0.6 : raw(rng);
    double best_a = 0.0, best = 1e300;
    const int n = 200000;
    for (int k = 0; k <= n; ++k) {
      const double a = static_cast<double>(k) / n;
      const double d = (a - v0) * (a - v0) + (1 - a - v1) * (1 - a - v1);
      if (d < best) best = d, best_a = a;
    }
    const auto p = project_to_simplex(std::vector<double>{v0, v1});
    CHECK(std::abs(p[0] - best_a) <= 1e-5);
  }
}

TEST_CASE("simplex projection is idempotent [property]") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + trial % 12);
    for (double& e : v) e = 2.0 * normal(rng);
    const auto p = project_to_simplex(v);
    double sum = 0.0;
    for (double e : p) {
      CHECK(e >= 0.0);
      sum += e;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    const auto q = project_to_simplex(p);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(q[i] - p[i]) <= 1e-12);
  }
}

TEST_CASE("expectation is linear and pof stays in [0,1] [property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t q = 1 + trial % 6, m = 1 + trial % 3;
    std::vector<double> points(q * m), raw(q);
    for (double& x : points) x = unit(rng);
    for (double& t : raw) t = unit(rng);
    const DiscreteMeasure mu(m, points, project_to_simplex(raw));
    const double a = 4 * unit(rng) - 2, b = 4 * unit(rng) - 2, c = unit(rng);
    auto f = [&](PointView x) { return std::sin(3 * x[0]) + x[m - 1]; };
    auto g = [&](PointView x) { return x[0] * x[0] - c; };
    const double lhs = expectation(mu, [&](PointView x) { return a * f(x) + b * g(x); });
    CHECK(lhs == doctest::Approx(a * expectation(mu, f) + b * expectation(mu, g)));
    const double pof = pof_under_measure(mu, [&](PointView x) { return x[0] > c; });
    CHECK(pof >= 0.0);
    CHECK(pof <= 1.0);
    CHECK(pof_under_measure(mu, [](PointView) { return true; }) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("measure CSV round trip") {
  const DiscreteMeasure m(2, {0.1, 0.2, 0.3, 1.0 / 3.0}, {0.25, 0.75});
  std::stringstream buf;
  write_measure_csv(buf, m);
  CHECK(buf.str().rfind("x1,x2,weight\n", 0) == 0);
  const DiscreteMeasure back = read_measure_csv(buf);
  CHECK(back.size() == 2);
  CHECK(back.point(1)[1] == 1.0 / 3.0);
  CHECK(back.weight(0) == 0.25);
}

}  // namespace
}  // namespace ouq
