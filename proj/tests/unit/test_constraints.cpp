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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ouq/constraints.hpp"
#include "ouq/error.hpp"
#include "ouq/optim.hpp"

namespace ouq {
namespace {

BoxDomain UpperHalf(std::size_t m, std::size_t d) {
  BoxDomain box = BoxDomain::unit(m);
  box.lower[d] = 0.5;
  return box;
}

const DiscreteMeasure kTwoPoint(1, {0.2, 0.8}, {0.5, 0.5});

TEST_CASE("residual examples") {
  CHECK(residual(MomentConstraint::mean(0, 0.5), kTwoPoint, false) == doctest::Approx(0.0));
  CHECK(residual(MomentConstraint::partial(0, 1, 0.0, UpperHalf(1, 0)), kTwoPoint, false) ==
        doctest::Approx(0.4));
  CHECK(residual(MomentConstraint::mass(UpperHalf(1, 0), 0.5), kTwoPoint, false) ==
        doctest::Approx(0.0));
}

TEST_CASE("exact subdomain indicator is half-open, closed on the cube face") {
  BoxDomain box = BoxDomain::unit(1);
  box.lower[0] = 0.25;
  box.upper[0] = 0.5;
  CHECK(in_subdomain(box, Point{0.25}));
  CHECK_FALSE(in_subdomain(box, Point{0.5}));
  CHECK(in_subdomain(UpperHalf(1, 0), Point{1.0}));
  CHECK_FALSE(in_subdomain(UpperHalf(1, 0), Point{0.4999}));
}

TEST_CASE("penalty examples") {
  AdmissibleSet set{BoxDomain::unit(1), {MomentConstraint::mean(0, 0.5)}};
  CHECK(penalty_term(set, PenaltyWeights::uniform(1), kTwoPoint, false) <= 1e-12);

  AdmissibleSet none{BoxDomain::unit(1), {}};
  const std::vector<double> pts{0.3, 0.6}, heavy{0.5, 0.6};
  CHECK(penalty_term(none, PenaltyWeights::uniform(0), WeightedPoints{1, pts, heavy}, false) ==
        doctest::Approx(10.0));

  AdmissibleSet off{BoxDomain::unit(1), {MomentConstraint::mean(0, 0.3)}};
  CHECK(penalty_term(off, PenaltyWeights::uniform(1), kTwoPoint, false) ==
        doctest::Approx(40.0));
}

TEST_CASE("case constraint sets from the truth") {
  const auto uniform = ProductDistribution::iid(UnivariateLaw::uniform(), 5);
  auto set = build_case_constraints({CaseKind::Mean}, uniform);
  REQUIRE(set.num_constraints() == 5);
  for (const auto& c : set.constraints) CHECK(c.target == 0.5);

  set = build_case_constraints({CaseKind::MomentsUpTo, 2}, uniform);
  REQUIRE(set.num_constraints() == 10);
  for (std::size_t d = 0; d < 5; ++d) {
    CHECK(set.constraints[2 * d].coordinate == d);
    CHECK(set.constraints[2 * d].target == doctest::Approx(0.5));
    CHECK(set.constraints[2 * d + 1].target == doctest::Approx(1.0 / 3.0));
  }
  CHECK(set.max_support() == 11);

  CaseSpec partial{CaseKind::Partial};
  partial.partial_dims = {2};
  set = build_case_constraints(partial, uniform);
  REQUIRE(set.num_constraints() == 7);
  CHECK(set.constraints[5].kind == ConstraintKind::SubdomainMass);
  CHECK(set.constraints[5].target == doctest::Approx(0.5));
  CHECK(set.constraints[6].target == doctest::Approx(0.375));
  CHECK(set.constraints[6].subdomain->lower[2] == 0.5);
  CHECK(set.constraints[6].subdomain->lower[0] == 0.0);

  partial.partial_dims = {7};
  CHECK_THROWS_AS(build_case_constraints(partial, uniform), InvalidArgument);
}

TEST_CASE("admissible set validation") {
  AdmissibleSet set{BoxDomain::unit(2), {MomentConstraint::mean(3, 0.5)}};
  CHECK_THROWS_AS(set.validate(), InvalidArgument);
  set.constraints = {MomentConstraint::mean(0, 2.0)};
  CHECK_NOTHROW(set.validate());
  CHECK_FALSE(set.targets_attainable());
  set.constraints = {MomentConstraint::mass(UpperHalf(1, 0), 0.5)};
  CHECK_THROWS_AS(set.validate(), InvalidArgument);
  CHECK_THROWS_AS(PenaltyWeights::uniform(1, -1.0).validate(1), InvalidArgument);
  CHECK_THROWS_AS(PenaltyWeights::uniform(2).validate(1), InvalidArgument);
}

TEST_CASE("smooth residual converges to the exact one [property]") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BoxDomain box = BoxDomain::unit(2);
  box.lower[0] = 0.3;
  box.upper[1] = 0.6;
  const auto c = MomentConstraint::partial(0, 2, 0.1, box);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pts;
    while (pts.size() < 8) {
      Point x{unit(rng), unit(rng)};
      if (std::abs(x[0] - 0.3) < 0.05 || std::abs(x[1] - 0.6) < 0.05) continue;
      pts.insert(pts.end(), x.begin(), x.end());
    }
    const DiscreteMeasure mu(2, pts, {0.1, 0.2, 0.3, 0.4});
    const double exact = residual(c, mu, false);
    double previous = 1e300;
    for (double beta : {10.0, 100.0, 1000.0}) {
      const double err = std::abs(residual(c, mu, true, beta) - exact);
      CHECK(err <= previous);
      previous = err;
    }
    CHECK(previous < 1e-10);
  }
}

TEST_CASE("integrand gradients match central differences [property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  BoxDomain box = BoxDomain::unit(3);
  box.lower[1] = 0.4;
  box.upper[2] = 0.7;
  const MomentConstraint cs[] = {MomentConstraint::raw_moment(0, 3, 0.1),
                                 MomentConstraint::partial(1, 2, 0.1, box),
                                 MomentConstraint::mass(box, 0.2)};
  for (const auto& c : cs) {
    for (int trial = 0; trial < 30; ++trial) {
      Point x{unit(rng), unit(rng), unit(rng)};
      std::vector<double> g(3);
      const double v = c.integrand_gradient(x, g, 20.0);
      CHECK(v == doctest::Approx(c.integrand(x, true, 20.0)));
      const auto fd = finite_difference_gradient(
          [&](std::span<const double> p) { return c.integrand(p, true, 20.0); }, x, 1e-6);
      for (std::size_t d = 0; d < 3; ++d) {
        CHECK(std::abs(g[d] - fd[d]) <= 1e-6 * std::max(1.0, std::abs(fd[d])));
      }
    }
  }
}

TEST_CASE("penalty vanishes exactly on feasible measures and ignores order [property]") {
  const auto truth = ProductDistribution::iid(UnivariateLaw::uniform(), 2);
  const AdmissibleSet set = build_case_constraints({CaseKind::Mean}, truth);
  const auto lambda = PenaltyWeights::uniform(2);
  // Symmetric pairs around the centre hit every mean exactly.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = unit(rng), b = unit(rng);
    const DiscreteMeasure mu(2, {0.5 - a, 0.5 - b, 0.5 + a, 0.5 + b}, {0.5, 0.5});
    CHECK(penalty_term(set, lambda, mu, false) <= 1e-12);
    const DiscreteMeasure skew(2, {0.5 - a, 0.5 - b, 0.5 + a, 0.5 + b}, {0.25, 0.75});
    const double p = penalty_term(set, lambda, skew, false);
    CHECK((a + b == 0.0 || p > 1e-12));
    const DiscreteMeasure swapped(2, {0.5 + a, 0.5 + b, 0.5 - a, 0.5 - b}, {0.75, 0.25});
    CHECK(penalty_term(set, lambda, swapped, false) == doctest::Approx(p).epsilon(1e-14));
  }
}

}  // namespace
}  // namespace ouq
