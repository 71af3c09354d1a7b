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
#include <memory>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ouq/distributions.hpp"
#include "ouq/error.hpp"
#include "ouq/response.hpp"

namespace ouq {
namespace {

using testing::RelErr;

const JohnsonCookBounds kBox = JohnsonCookBounds::az31b();
const FixedMaterialParams kFixed;

TEST_CASE("denormalize hits the table corners") {
  auto lo = denormalize(Point(5, 0.0), kBox);
  CHECK(lo.A == 200.372);
  CHECK(lo.B == 150.682);
  CHECK(lo.n == 0.160);
  CHECK(lo.C == 0.012);
  CHECK(lo.m_exp == 1.523);
  auto hi = denormalize(Point(5, 1.0), kBox);
  CHECK(hi.A == 249.970);
  CHECK(hi.B == 186.010);
  CHECK(hi.n == 0.324);
  CHECK(hi.C == 0.014);
  CHECK(hi.m_exp == 1.577);
  CHECK(denormalize(Point{0.5, 0, 0, 0, 0}, kBox).A == doctest::Approx(225.171));
  CHECK_THROWS_AS(denormalize(Point(4, 0.5), kBox), InvalidArgument);
}

TEST_CASE("normalize inverts denormalize [property]") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Point x(5);
    for (double& v : x) v = unit(rng);
    const Point back = normalize(denormalize(x, kBox), kBox);
    for (std::size_t d = 0; d < 5; ++d) CHECK(std::abs(back[d] - x[d]) < 1e-12);
  }
}

TEST_CASE("flow stress identities") {
  for (int corner = 0; corner < 32; ++corner) {
    Point x(5);
    for (int d = 0; d < 5; ++d) x[d] = (corner >> d) & 1;
    const auto p = denormalize(x, kBox);
    CHECK(jc_flow_stress(p, kFixed, 0.0, kFixed.ref_strain_rate, kFixed.ref_temperature) == p.A);
    CHECK(jc_flow_stress(p, kFixed, 0.25, 5e3, kFixed.melt_temperature) == 0.0);
  }
  // 200.372 + 150.682 * 0.1^0.16, reference from a 40-digit evaluation.
  const JohnsonCookParams p{200.372, 150.682, 0.160, 0.012, 1.523};
  const double sigma = jc_flow_stress(p, kFixed, 0.1, kFixed.ref_strain_rate,
                                      kFixed.ref_temperature);
  CHECK(RelErr(sigma, 304.61847436000718781) < 1e-12);
}

TEST_CASE("flow stress rejects states outside its domain") {
  const JohnsonCookParams p{200, 150, 0.2, 0.013, 1.5};
  CHECK_THROWS_AS(jc_flow_stress(p, kFixed, -0.1, 1.0, 300.0), InvalidArgument);
  CHECK_THROWS_AS(jc_flow_stress(p, kFixed, 0.1, 0.0, 300.0), InvalidArgument);
  CHECK_THROWS_AS(jc_flow_stress(p, kFixed, 0.1, 1.0, 1000.0), InvalidArgument);
}

TEST_CASE("flow stress grows with A and B [property]") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    Point x(5);
    for (double& v : x) v = unit(rng);
    const double eps = 0.01 + unit(rng), rate = 1e-3 * std::pow(10.0, 7 * unit(rng));
    const double temp = 298.0 + 600.0 * unit(rng);
    auto base = denormalize(x, kBox);
    const double s0 = jc_flow_stress(base, kFixed, eps, rate, temp);
    auto more_a = base;
    more_a.A += 1.0;
    auto more_b = base;
    more_b.B += 1.0;
    CHECK(jc_flow_stress(more_a, kFixed, eps, rate, temp) > s0);
    CHECK(jc_flow_stress(more_b, kFixed, eps, rate, temp) > s0);
  }
}

TEST_CASE("synthetic deflection") {
  const SyntheticDeflection f;
  CHECK(f.evaluate(Point(5, 0.5)) == doctest::Approx(1.05).epsilon(1e-12));
  Point soft(5, 0.5), hard(5, 0.5);
  soft[0] = 0.2;
  hard[0] = 0.8;
  CHECK(f.evaluate(hard) < f.evaluate(soft));

  const Matrix x = lhs_sample(BoxDomain::unit(5), {2000, 1, 7});
  double lo = 1e300, hi = -1e300;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double y = f.evaluate(x.row(r));
    CHECK(std::isfinite(y));
    CHECK(y > 0.0);
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  CHECK(lo <= 0.9);
  CHECK(hi >= 1.3);
}

TEST_CASE("synthetic deflection is continuous on a dense sample [property]") {
  const SyntheticDeflection f;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    Point x(5);
    for (double& v : x) v = unit(rng);
    Point y = x;
    for (double& v : y) v = std::clamp(v + 1e-7 * (unit(rng) - 0.5), 0.0, 1.0);
    CHECK(std::abs(f.evaluate(x) - f.evaluate(y)) < 1e-5);
  }
}

TEST_CASE("threshold indicator is the level set of the response") {
  auto constant = [](double y) {
    return std::make_shared<FunctionResponse>(1, [y](PointView) { return y; });
  };
  const Point x{0.5};
  CHECK(ThresholdIndicator(constant(1.2), 1.03)(x));
  CHECK_FALSE(ThresholdIndicator(constant(0.9), 1.03)(x));
  CHECK(ThresholdIndicator(constant(1.03), 1.03)(x));

  auto f = std::make_shared<SyntheticDeflection>();
  const ThresholdIndicator ind(f, 1.03);
  const Matrix pts = lhs_sample(BoxDomain::unit(5), {500, 1, 8});
  for (std::size_t r = 0; r < pts.rows(); ++r) {
    CHECK(ind(pts.row(r)) == (f->evaluate(pts.row(r)) >= 1.03));
  }
}

TEST_CASE("response table round trip") {
  const auto dir = testing::ScratchDir("response");
  const Matrix x = lhs_sample(BoxDomain::unit(5), {20, 1, 9});
  const ResponseTable table = evaluate_table(SyntheticDeflection(), x);
  write_response_table(dir / "t.csv", table);
  const ResponseTable back = read_response_table(dir / "t.csv");
  CHECK(back.inputs == table.inputs);
  CHECK(back.outputs == table.outputs);
}

}  // namespace
}  // namespace ouq
