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

#include "ouq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "ouq/certify.hpp"
#include "ouq/distributions.hpp"
#include "ouq/kernels.hpp"
#include "ouq/response.hpp"
#include "ouq/solver.hpp"
#include "ouq/surrogate.hpp"

namespace ouq {
namespace {

// Steep logistic score around x1 = 0.5; stands in for a trained
// classifier of the identity response.
class StepScore final : public DifferentiableScore {
 public:
  std::size_t dimension() const override { return 1; }
  double value(PointView x) const override { return sigmoid(kSlope * (x[0] - 0.5)); }
  double value_and_gradient(PointView x, std::span<double> g) const override {
    const double s = value(x);
    g[0] = kSlope * s * (1.0 - s);
    return s;
  }

 private:
  static constexpr double kSlope = 2000.0;
};

std::string Describe(double value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

CheckResult Kernels() {
  CheckResult r{"kernels: scalar and vector variants agree", true, "vector ISA not built"};
  if (!kernels::isa_available(kernels::Isa::Avx2)) return r;
  const auto& s = kernels::table(kernels::Isa::Scalar);
  const auto& v = kernels::table(kernels::Isa::Avx2);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (std::size_t rows : {1u, 3u, 7u, 33u}) {
    for (std::size_t cols : {1u, 4u, 13u, 200u}) {
      std::vector<double> w(rows * cols), x(cols), b(rows), o1(rows), o2(rows);
      for (double& e : w) e = normal(rng);
      for (double& e : x) e = normal(rng);
      for (double& e : b) e = normal(rng);
      s.affine(w.data(), b.data(), x.data(), o1.data(), rows, cols);
      v.affine(w.data(), b.data(), x.data(), o2.data(), rows, cols);
      for (std::size_t i = 0; i < rows; ++i) {
        worst = std::max(worst, std::abs(o1[i] - o2[i]) / (1.0 + std::abs(o1[i])));
      }
    }
  }
  r.passed = worst < 1e-12;
  r.detail = "max rel diff " + Describe(worst);
  return r;
}

CheckResult Simplex() {
  CheckResult r{"measures: simplex projection", true, ""};
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200 && r.passed; ++trial) {
    std::vector<double> raw(1 + trial % 9);
    for (double& e : raw) e = normal(rng);
    const auto p = project_to_simplex(raw);
    double sum = 0.0;
    for (double e : p) {
      sum += e;
      if (e < 0.0) r.passed = false;
    }
    if (std::abs(sum - 1.0) > 1e-12) r.passed = false;
    // Points already on the simplex are fixed.
    const auto q = project_to_simplex(p);
    for (std::size_t i = 0; i < p.size(); ++i) r.passed &= std::abs(q[i] - p[i]) < 1e-12;
  }
  r.detail = r.passed ? "200 random inputs" : "off-simplex output";
  return r;
}

CheckResult Lhs() {
  CheckResult r{"distributions: LHS stratification", true, ""};
  const std::size_t strata = 97, per = 3;
  const Matrix x = lhs_sample(BoxDomain::unit(4), {strata, per, 9});
  for (std::size_t d = 0; d < 4; ++d) {
    std::vector<std::size_t> count(strata, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      ++count[std::min(strata - 1, static_cast<std::size_t>(x(i, d) * strata))];
    }
    r.passed &= std::all_of(count.begin(), count.end(), [&](auto c) { return c == per; });
  }
  r.detail = "97 strata x 3 per stratum, 4 coordinates";
  return r;
}

CheckResult JohnsonCook() {
  CheckResult r{"response: Johnson-Cook identities", true, "32 corner parameter sets"};
  const auto bounds = JohnsonCookBounds::az31b();
  const FixedMaterialParams fixed;
  for (int corner = 0; corner < 32; ++corner) {
    Point x(5);
    for (int d = 0; d < 5; ++d) x[d] = (corner >> d) & 1;
    const auto p = denormalize(x, bounds);
    r.passed &= jc_flow_stress(p, fixed, 0.0, fixed.ref_strain_rate, fixed.ref_temperature) == p.A;
    r.passed &= jc_flow_stress(p, fixed, 0.3, 1e3, fixed.melt_temperature) == 0.0;
  }
  return r;
}

CheckResult Gradients() {
  CheckResult r{"surrogate: input gradients match central differences", true, ""};
  const MlpModel model = MlpModel::initialized({3, 16, 16, 1}, 11);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Point x{unit(rng), unit(rng), unit(rng)};
    std::vector<double> g(3);
    model.value_and_gradient(x, g);
    for (std::size_t d = 0; d < 3; ++d) {
      const double h = 1e-5;
      Point a = x, b = x;
      a[d] += h;
      b[d] -= h;
      const double fd = (model.forward(a) - model.forward(b)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[d]) / std::max(std::abs(g[d]), 1e-6));
    }
  }
  r.passed = worst < 1e-4;
  r.detail = "max rel err " + Describe(worst);
  return r;
}

CheckResult RoundTrip() {
  CheckResult r{"surrogate: model file round trip", false, ""};
  const MlpModel model = MlpModel::initialized({2, 5, 1}, 13);
  std::stringstream buf;
  save_model(buf, model);
  r.passed = load_model(buf) == model;
  r.detail = r.passed ? "bit-exact" : "parameters differ";
  return r;
}

CheckResult Markov() {
  CheckResult r{"solver: Markov bound P[X >= 1/2] <= 2 E[X]", false, ""};
  OuqProblem problem;
  problem.set = {BoxDomain::unit(1), {MomentConstraint::mean(0, 0.25)}};
  problem.surrogate = std::make_shared<StepScore>();
  problem.exact_indicator = [](PointView x) { return x[0] >= 0.5; };
  problem.penalties = PenaltyWeights::uniform(1, 1e3);
  problem.config.restarts = 8;
  problem.config.adam.max_iterations = 10000;
  const BoundResult upper = solve(problem);
  problem.direction = Direction::Lower;
  const BoundResult lower = solve(problem);
  r.passed = std::abs(upper.exact_bound - 0.5) < 2e-2 && std::abs(lower.exact_bound) < 2e-2;
  r.detail = "U=" + Describe(upper.exact_bound) + " L=" + Describe(lower.exact_bound);
  return r;
}

CheckResult Verdicts() {
  CheckResult r{"certify: verdict monotone in tolerance", true, ""};
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    double u = unit(rng), l = unit(rng);
    if (l > u) std::swap(l, u);
    int previous = -1;
    for (int k = 0; k <= 20; ++k) {
      // Decertified (0) -> CannotDecide (1) -> Certified (2) as eps grows.
      const Verdict v = verdict(u, l, k / 20.0);
      const int rank = v == Verdict::Decertified ? 0 : v == Verdict::CannotDecide ? 1 : 2;
      r.passed &= rank >= previous;
      previous = rank;
    }
  }
  r.detail = "500 random (U, L) pairs";
  return r;
}

CheckResult Guarded(const std::string& name, const std::function<CheckResult()>& check) {
  try {
    return check();
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

}  // namespace

std::vector<CheckResult> run_invariant_checks() {
  return {
      Guarded("kernels", Kernels),         Guarded("simplex", Simplex),
      Guarded("lhs", Lhs),                 Guarded("johnson-cook", JohnsonCook),
      Guarded("gradients", Gradients),     Guarded("round trip", RoundTrip),
      Guarded("markov", Markov),           Guarded("verdict", Verdicts),
  };
}

bool report_checks(const std::vector<CheckResult>& checks, std::ostream& out) {
  bool all = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << '\n';
    all &= c.passed;
  }
  return all;
}

}  // namespace ouq
