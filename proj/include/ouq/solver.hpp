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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ouq/constraints.hpp"
#include "ouq/measures.hpp"
#include "ouq/optim.hpp"
#include "ouq/surrogate.hpp"

namespace ouq {

enum class Direction { Upper, Lower };

std::string to_string(Direction direction);
Direction parse_direction(const std::string& text);

inline constexpr double kDefaultFinalSharpness = 2e4;

struct SolverConfig {
  std::size_t restarts = 50;
  AdamConfig adam{1e-2, 0.9, 0.999, 1e-8, 2000, 1e-6};
  // Smooth subdomain indicators: the sharpness grows geometrically from
  // `sharpness` to `final_sharpness` over the ADAM iterations, so atoms
  // left inside a ramp are pushed to one side before the exact check.
  double sharpness = kDefaultSharpness;
  double final_sharpness = kDefaultFinalSharpness;
  double feasibility_tolerance = 1e-2;   // on exact max |residual|
  bool feasibility_filter = true;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const;
};

// Bound problem over the K+1 point extremal measures of an admissible set.
// The surrogate guides the search; the exact indicator, when present,
// scores the final measures.
struct OuqProblem {
  Direction direction = Direction::Upper;
  AdmissibleSet set;
  std::shared_ptr<const DifferentiableScore> surrogate;
  std::optional<IndicatorFn> exact_indicator;
  PenaltyWeights penalties;
  SolverConfig config;

  std::size_t dimension() const { return set.domain.dimension(); }
  std::size_t support_size() const { return set.max_support(); }
  void validate() const;
};

// Unconstrained optimization variables: for each of the Q points, m
// logits squashed into (0,1) by the logistic map, then Q raw weights w_i
// with t_i = w_i^2 (nonnegative; the simplex is enforced by penalty).
struct MeasureParams {
  std::size_t support = 0;
  std::size_t dimension = 0;
  std::vector<double> values;

  MeasureParams(std::size_t support, std::size_t dimension)
      : support(support), dimension(dimension), values(support * (dimension + 1), 0.0) {}

  std::span<double> logits() { return std::span<double>(values).first(support * dimension); }
  std::span<double> raw_weights() { return std::span<double>(values).last(support); }

  static MeasureParams encode(std::span<const double> points, std::span<const double> weights,
                              std::size_t dimension);
  // Points in (0,1)^m and weights t_i = w_i^2 (not normalized).
  static void decode(std::span<const double> values, std::size_t support,
                     std::size_t dimension, std::vector<double>& points,
                     std::vector<double>& weights);
};

// Penalized objective  s * sum t_i D(X_i) + penalty, s = -1 for the upper
// bound and +1 for the lower bound, with smooth constraint residuals.
// Writes the exact gradient w.r.t. the parameters. Throws NumericError on
// a non-finite value.
double ouq_loss(std::span<const double> params, const OuqProblem& problem,
                std::span<double> gradient);
// Same, at an explicit subdomain sharpness.
double ouq_loss(std::span<const double> params, const OuqProblem& problem,
                std::span<double> gradient, double sharpness);

// Sharpness at ADAM iteration `iteration` of the continuation schedule.
double sharpness_at(const SolverConfig& config, std::size_t iteration);

struct RestartRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double smoothed = 0.0;      // sum t_i D(X_i), projected weights
  double exact = 0.0;         // sum t_i 1[F(X_i) in unsafe set]
  double max_residual = 0.0;  // exact indicators
  double final_loss = 0.0;
  std::size_t iterations = 0;
  bool feasible = false;
  bool failed = false;
  std::string failure;
};

struct BoundResult {
  Direction direction = Direction::Upper;
  double bound = 0.0;        // surrogate objective of the selected measure
  double exact_bound = 0.0;  // exact re-evaluation (or thresholded surrogate)
  bool exact_available = false;
  std::optional<DiscreteMeasure> measure;
  double max_residual = 0.0;
  bool feasible = false;
  std::size_t restarts_feasible = 0;
  std::vector<RestartRecord> restarts;
};

// One ADAM run from a random measure, then simplex projection and exact
// re-evaluation. Divergence marks the record failed instead of throwing.
std::pair<RestartRecord, std::optional<DiscreteMeasure>> optimize_restart(
    const OuqProblem& problem, std::size_t index);

// Multistart: best exact objective among restarts whose exact residual is
// below the feasibility tolerance; the least infeasible one otherwise.
BoundResult solve(const OuqProblem& problem);

// Exhaustive search over grid points {0, 1/G, ..., 1}^m for measures with
// at most K+1 <= 2 atoms, weights fixed by eliminating the constraint.
// Exact indicator only. Throws InvalidArgument when the enumeration would
// exceed max_evaluations.
BoundResult brute_force_bound(const OuqProblem& problem, std::size_t grid_resolution,
                              std::size_t max_evaluations = 100'000'000);

}  // namespace ouq
