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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ouq/error.hpp"
#include "ouq/solver.hpp"

namespace ouq {
namespace {

using testing::HalfSpaceScore;

class NanScore final : public DifferentiableScore {
 public:
  std::size_t dimension() const override { return 1; }
  double value(PointView) const override { return std::nan(""); }
  double value_and_gradient(PointView, std::span<double> g) const override {
    g[0] = 0.0;
    return std::nan("");
  }
};

// Unsafe iff normal . x >= offset, classified by a steep logistic score.
OuqProblem HalfSpaceProblem(std::vector<double> normal, double offset,
                            std::vector<MomentConstraint> constraints,
                            Direction direction = Direction::Upper) {
  auto score = std::make_shared<HalfSpaceScore>(std::move(normal), offset);
  OuqProblem p;
  p.direction = direction;
  p.set = {BoxDomain::unit(score->dimension()), std::move(constraints)};
  p.surrogate = score;
  p.exact_indicator = [score](PointView x) { return score->unsafe(x); };
  p.penalties = PenaltyWeights::uniform(p.set.num_constraints());
  p.config.restarts = 10;
  p.config.adam.max_iterations = 10000;
  p.config.seed = 7;
  return p;
}

OuqProblem MarkovToy(Direction direction = Direction::Upper) {
  return HalfSpaceProblem({1.0}, 0.5, {MomentConstraint::mean(0, 0.25)}, direction);
}

TEST_CASE("measure parameters round-trip") {
  const std::vector<double> points{0.1, 0.9, 0.5, 0.25}, weights{0.3, 0.7};
  const auto p = MeasureParams::encode(points, weights, 2);
  std::vector<double> pts, wts;
  MeasureParams::decode(p.values, 2, 2, pts, wts);
  for (std::size_t i = 0; i < 4; ++i) CHECK(pts[i] == doctest::Approx(points[i]));
  CHECK(wts[0] == doctest::Approx(0.3));
  CHECK(wts[1] == doctest::Approx(0.7));
}

TEST_CASE("loss examples") {
  // Score 1 everywhere on [0,1]: the half-space x >= -10.
  OuqProblem up = HalfSpaceProblem({1.0}, -10.0, {});
  const auto one = MeasureParams::encode(std::vector<double>{0.4}, std::vector<double>{1.0}, 1);
  std::vector<double> g(2);
  CHECK(ouq_loss(one.values, up, g) == doctest::Approx(-1.0));

  // Score 0 everywhere, feasible Dirac at the mean.
  OuqProblem low = HalfSpaceProblem({1.0}, 10.0, {MomentConstraint::mean(0, 0.25)},
                                    Direction::Lower);
  const auto dirac =
      MeasureParams::encode(std::vector<double>{0.25, 0.7}, std::vector<double>{1.0, 0.0}, 1);
  std::vector<double> g2(4);
  CHECK(std::abs(ouq_loss(dirac.values, low, g2)) < 1e-12);
}

TEST_CASE("loss gradient matches central differences [property]") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  BoxDomain box = BoxDomain::unit(2);
  box.lower[0] = 0.5;
  for (int trial = 0; trial < 20; ++trial) {
    OuqProblem p;
    p.direction = trial % 2 ? Direction::Upper : Direction::Lower;
    p.set = {BoxDomain::unit(2),
             {MomentConstraint::mean(0, 0.4), MomentConstraint::raw_moment(1, 2, 0.3),
              MomentConstraint::mass(box, 0.5), MomentConstraint::partial(0, 1, 0.35, box)}};
    p.surrogate = std::make_shared<MlpModel>(MlpModel::initialized({2, 6, 6, 1}, 50 + trial));
    p.penalties = PenaltyWeights::uniform(4, 10.0);
    p.config.sharpness = 20.0;
    std::vector<double> params(5 * 3);
    for (double& v : params) v = normal(rng);
    std::vector<double> grad(params.size());
    ouq_loss(params, p, grad);
    std::vector<double> scratch(params.size());
    const auto fd = finite_difference_gradient(
        [&](std::span<const double> q) { return ouq_loss(q, p, scratch); }, params, 1e-6);
    for (std::size_t i = 0; i < params.size(); ++i) {
      CHECK(std::abs(grad[i] - fd[i]) <= 1e-4 * std::max(1.0, std::abs(fd[i])));
    }
  }
}

TEST_CASE("sharpness continuation schedule") {
  SolverConfig c;
  c.sharpness = 100.0;
  c.final_sharpness = 10000.0;
  c.adam.max_iterations = 3;
  CHECK(sharpness_at(c, 0) == doctest::Approx(100.0));
  CHECK(sharpness_at(c, 1) == doctest::Approx(1000.0));
  CHECK(sharpness_at(c, 2) == doctest::Approx(10000.0));
  CHECK(sharpness_at(c, 3) == doctest::Approx(10000.0));  // final evaluation
  c.final_sharpness = c.sharpness;
  CHECK(sharpness_at(c, 2) == 100.0);
}

TEST_CASE("continuation keeps atoms off subdomain edges") {
  // The mass constraint on [1/2, 1] pins the answer at 0.3, and the
  // optimal atoms sit exactly on the subdomain edge x = 1/2.
  BoxDomain right = BoxDomain::unit(1);
  right.lower[0] = 0.5;
  OuqProblem p = HalfSpaceProblem(
      {1.0}, 0.5, {MomentConstraint::mass(right, 0.3), MomentConstraint::mean(0, 0.25)});
  p.config.restarts = 5;
  p.config.adam.max_iterations = 3000;
  for (Direction d : {Direction::Upper, Direction::Lower}) {
    p.direction = d;
    const BoundResult r = solve(p);
    CHECK(r.feasible);
    CHECK(r.restarts_feasible == p.config.restarts);
    CHECK(std::abs(r.exact_bound - 0.3) <= 1e-2);
  }
}

TEST_CASE("single restarts") {
  // K = 0 with a reachable unsafe set: the worst case.
  OuqProblem worst = HalfSpaceProblem({1.0, 1.0}, 1.5, {});
  auto [rec, measure] = optimize_restart(worst, 0);
  CHECK(rec.exact == 1.0);
  REQUIRE(measure);
  CHECK(measure->size() == 1);

  OuqProblem safe = HalfSpaceProblem({1.0}, 5.0, {});
  CHECK(optimize_restart(safe, 0).first.exact == 0.0);

  auto again = optimize_restart(worst, 0);
  CHECK(again.first.smoothed == rec.smoothed);
  CHECK(again.first.seed == worst.config.seed);
  CHECK(optimize_restart(worst, 3).first.seed == worst.config.seed + 3);
}

TEST_CASE("Markov toy bounds") {
  const BoundResult upper = solve(MarkovToy());
  CHECK(upper.feasible);
  CHECK(upper.exact_available);
  CHECK(std::abs(upper.exact_bound - 0.5) <= 1e-2);
  CHECK(upper.max_residual < 1e-2);
  CHECK(upper.restarts.size() == 10);
  const BoundResult lower = solve(MarkovToy(Direction::Lower));
  CHECK(std::abs(lower.exact_bound) <= 1e-2);
  CHECK(lower.exact_bound <= upper.exact_bound + 2e-2);

  OuqProblem free = MarkovToy();
  free.set.constraints.clear();
  free.penalties = PenaltyWeights::uniform(0);
  CHECK(std::abs(solve(free).exact_bound - 1.0) <= 1e-2);
}

TEST_CASE("brute-force oracle") {
  const BoundResult b200 = brute_force_bound(MarkovToy(), 200);
  CHECK(b200.feasible);
  CHECK(std::abs(b200.exact_bound - 0.5) <= 1.0 / 200);
  CHECK(brute_force_bound(MarkovToy(), 400).exact_bound == doctest::Approx(b200.exact_bound));
  CHECK(brute_force_bound(MarkovToy(Direction::Lower), 200).exact_bound == 0.0);

  OuqProblem free = MarkovToy();
  free.set.constraints.clear();
  CHECK(brute_force_bound(free, 50).exact_bound == 1.0);

  OuqProblem impossible = MarkovToy();
  impossible.set.constraints = {MomentConstraint::mean(0, 2.0)};
  const BoundResult none = brute_force_bound(impossible, 100);
  CHECK_FALSE(none.feasible);
  CHECK(std::isnan(none.exact_bound));

  OuqProblem two = MarkovToy();
  two.set.constraints.push_back(MomentConstraint::raw_moment(0, 2, 0.1));
  CHECK_THROWS_AS(brute_force_bound(two, 10), InvalidArgument);
}

TEST_CASE("solver matches the brute-force oracle in two dimensions") {
  BoxDomain right = BoxDomain::unit(2);
  right.lower[0] = 0.5;
  const std::vector<std::vector<MomentConstraint>> fixtures = {
      {MomentConstraint::mean(0, 0.3)},
      {MomentConstraint::mass(right, 0.3)},
      {},
  };
  const std::size_t grid = 40;
  for (const auto& constraints : fixtures) {
    for (Direction dir : {Direction::Upper, Direction::Lower}) {
      OuqProblem p = HalfSpaceProblem({1.0, 1.0}, 1.6, constraints, dir);
      const double oracle = brute_force_bound(p, grid).exact_bound;
      const double found = solve(p).exact_bound;
      CHECK(std::abs(found - oracle) <= std::max(1e-2, 1.0 / grid));
    }
  }
}

TEST_CASE("threads do not change the result") {
  OuqProblem p = MarkovToy();
  p.config.restarts = 6;
  p.config.adam.max_iterations = 1500;
  const BoundResult serial = solve(p);
  p.config.threads = 3;
  const BoundResult parallel = solve(p);
  CHECK(serial.exact_bound == parallel.exact_bound);
  CHECK(serial.bound == parallel.bound);
  for (std::size_t r = 0; r < 6; ++r) {
    CHECK(serial.restarts[r].final_loss == parallel.restarts[r].final_loss);
  }
}

TEST_CASE("infeasible and failing problems") {
  OuqProblem impossible = MarkovToy();
  impossible.set.constraints = {MomentConstraint::mean(0, 2.0)};
  impossible.config.restarts = 3;
  impossible.config.adam.max_iterations = 300;
  const BoundResult r = solve(impossible);
  CHECK_FALSE(r.feasible);
  CHECK(r.restarts_feasible == 0);
  CHECK(r.max_residual > 0.5);

  OuqProblem broken = MarkovToy();
  broken.surrogate = std::make_shared<NanScore>();
  broken.config.restarts = 2;
  const BoundResult b = solve(broken);
  CHECK(b.restarts[0].failed);
  CHECK_FALSE(b.restarts[0].failure.empty());
  CHECK(std::isnan(b.exact_bound));

  OuqProblem mismatch = MarkovToy();
  mismatch.surrogate = std::make_shared<HalfSpaceScore>(std::vector<double>{1, 1}, 1.0);
  CHECK_THROWS_AS(solve(mismatch), InvalidArgument);
  CHECK(parse_direction("lower") == Direction::Lower);
  CHECK_THROWS_AS(parse_direction("sideways"), InvalidArgument);
}

TEST_CASE("without an exact indicator the thresholded surrogate scores the measure") {
  OuqProblem p = MarkovToy();
  p.exact_indicator.reset();
  p.config.restarts = 4;
  const BoundResult r = solve(p);
  CHECK_FALSE(r.exact_available);
  CHECK(std::abs(r.exact_bound - 0.5) <= 2e-2);
}

}  // namespace
}  // namespace ouq
