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
#include <numbers>

#include "doctest.h"
#include "ouq/distributions.hpp"
#include "ouq/error.hpp"

namespace ouq {
namespace {

// Midpoint Riemann sum, independent of the library's adaptive quadrature.
template <typename F>
double Riemann(F f, double a, double b, int n = 2'000'000) {
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(a + (i + 0.5) * h);
  return sum * h;
}

double NormalPdf(double x, double loc, double scale) {
  const double z = (x - loc) / scale;
  return std::exp(-0.5 * z * z) / (scale * std::sqrt(2 * std::numbers::pi));
}

std::vector<std::size_t> BinCounts(const Matrix& x, std::size_t d, std::size_t bins) {
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    ++counts[std::min(bins - 1, static_cast<std::size_t>(x(r, d) * bins))];
  }
  return counts;
}

TEST_CASE("LHS places one point per quartile") {
  const Matrix x = lhs_sample(BoxDomain::unit(1), {4, 1, 1});
  REQUIRE(x.rows() == 4);
  CHECK(BinCounts(x, 0, 4) == std::vector<std::size_t>(4, 1));
}

TEST_CASE("LHS at the training-set size") {
  const Matrix x = lhs_sample(BoxDomain::unit(5), {2000, 1, 2});
  REQUIRE(x.rows() == 2000);
  for (std::size_t d = 0; d < 5; ++d) {
    CHECK(BinCounts(x, d, 2000) == std::vector<std::size_t>(2000, 1));
  }
  CHECK(x == lhs_sample(BoxDomain::unit(5), {2000, 1, 2}));
  CHECK_FALSE(x == lhs_sample(BoxDomain::unit(5), {2000, 1, 3}));
}

TEST_CASE("LHS stratification holds for many shapes [property]") {
  for (std::size_t strata : {1u, 2u, 7u, 64u, 333u}) {
    for (std::size_t per : {1u, 3u}) {
      const Matrix x = lhs_sample(BoxDomain::unit(3), {strata, per, strata * 10 + per});
      for (std::size_t d = 0; d < 3; ++d) {
        CHECK(BinCounts(x, d, strata) == std::vector<std::size_t>(strata, per));
      }
    }
  }
  CHECK_THROWS_AS(lhs_sample(BoxDomain::unit(2), {0, 1, 0}), InvalidArgument);
}

TEST_CASE("iid sampling") {
  const auto uniform = ProductDistribution::iid(UnivariateLaw::uniform(), 3);
  const Matrix u = sample_iid(uniform, 100000, 9);
  for (std::size_t d = 0; d < 3; ++d) {
    double mean = 0.0;
    for (std::size_t r = 0; r < u.rows(); ++r) mean += u(r, d);
    CHECK(std::abs(mean / u.rows() - 0.5) < 0.01);
  }
  const auto wide = ProductDistribution::iid(UnivariateLaw::truncated_gaussian(0.5, 10.0), 1);
  const Matrix w = sample_iid(wide, 100000, 10);
  double mean = 0.0;
  for (std::size_t r = 0; r < w.rows(); ++r) mean += w(r, 0);
  const double oracle = Riemann([](double x) { return x * NormalPdf(x, 0.5, 10.0); }, 0, 1) /
                        Riemann([](double x) { return NormalPdf(x, 0.5, 10.0); }, 0, 1);
  CHECK(oracle == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(mean / w.rows() - oracle) < 0.01);

  const auto bimodal = ProductDistribution::iid(UnivariateLaw::bimodal(), 2);
  const Matrix b = sample_iid(bimodal, 20000, 11);
  CHECK(*std::min_element(b.data().begin(), b.data().end()) >= 0.0);
  CHECK(*std::max_element(b.data().begin(), b.data().end()) <= 1.0);
}

TEST_CASE("moments") {
  const auto u = ProductDistribution::iid(UnivariateLaw::uniform(), 1);
  CHECK(moment(u, 1, 0) == 0.5);
  CHECK(moment(u, 2, 0) == doctest::Approx(1.0 / 3.0));
  const auto g = ProductDistribution::iid(UnivariateLaw::truncated_gaussian(0.5, 0.2), 1);
  CHECK(moment(g, 1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(moment(u, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(moment(u, 1, 1), InvalidArgument);
}

TEST_CASE("partial moments") {
  const auto u = ProductDistribution::iid(UnivariateLaw::uniform(), 1);
  auto pm = partial_moment(u, 1, 0, 0.5, 1.0);
  CHECK(pm.mass == doctest::Approx(0.5));
  CHECK(pm.moment == doctest::Approx(0.375));
  pm = partial_moment(u, 1, 0, 0.0, 1.0);
  CHECK(pm.mass == doctest::Approx(1.0));
  CHECK(pm.moment == doctest::Approx(0.5));

  const auto g = ProductDistribution::iid(UnivariateLaw::truncated_gaussian(0.5, 0.2), 1);
  pm = partial_moment(g, 1, 0, 0.5, 1.0);
  const double z = Riemann([](double x) { return NormalPdf(x, 0.5, 0.2); }, 0, 1);
  const double oracle =
      Riemann([](double x) { return x * NormalPdf(x, 0.5, 0.2); }, 0.5, 1) / z;
  CHECK(pm.mass == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(pm.moment - oracle) / oracle < 1e-6);
}

TEST_CASE("moment properties for every law [property]") {
  const UnivariateLaw laws[] = {UnivariateLaw::uniform(),
                                UnivariateLaw::truncated_gaussian(0.3, 0.15),
                                UnivariateLaw::bimodal()};
  for (const auto& law : laws) {
    const ProductDistribution dist({law});
    double previous = 1.0;
    for (int j = 1; j <= 6; ++j) {
      const double mj = moment(dist, j, 0);
      CHECK(mj <= previous + 1e-15);
      previous = mj;
      const auto full = partial_moment(dist, j, 0, 0.0, 1.0);
      CHECK(std::abs(full.mass - 1.0) < 1e-9);
      CHECK(std::abs(full.moment - mj) < 1e-9);
    }
    // Empirical moments converge at the CLT rate.
    const Matrix x = sample_iid(dist, 40000, 12);
    for (int j = 1; j <= 3; ++j) {
      double s = 0.0, s2 = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) {
        const double v = std::pow(x(r, 0), j);
        s += v;
        s2 += v * v;
      }
      const double n = static_cast<double>(x.rows());
      const double mean = s / n;
      const double sd = std::sqrt(std::max(s2 / n - mean * mean, 0.0));
      CHECK(std::abs(mean - moment(dist, j, 0)) <= 3 * sd / std::sqrt(n));
    }
  }
}

TEST_CASE("laws: cdf and quantile are inverse") {
  const UnivariateLaw laws[] = {UnivariateLaw::uniform(),
                                UnivariateLaw::truncated_gaussian(0.5, 0.2),
                                UnivariateLaw::bimodal()};
  for (const auto& law : laws) {
    CHECK(law.cdf(0.0) == doctest::Approx(0.0));
    CHECK(law.cdf(1.0) == doctest::Approx(1.0));
    for (double u = 0.01; u < 1.0; u += 0.07) {
      CHECK(law.cdf(law.quantile(u)) == doctest::Approx(u).epsilon(1e-9));
    }
  }
  // Bimodal density integrates to one with modes at 0.25 and 0.75.
  const auto b = UnivariateLaw::bimodal();
  CHECK(Riemann([&](double x) { return b.pdf(x); }, 0, 1, 200000) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b.pdf(0.25) > b.pdf(0.5));
  CHECK(b.pdf(0.75) > b.pdf(0.5));
}

}  // namespace
}  // namespace ouq
