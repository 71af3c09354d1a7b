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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ouq/solver.hpp"

namespace ouq {

enum class Verdict { Certified, Decertified, CannotDecide };

std::string to_string(Verdict verdict);

// Gap by which a lower bound may exceed the upper bound before it is
// treated as an inconsistency rather than optimizer noise.
inline constexpr double kBoundReconcileTolerance = 2e-2;

struct ReconciledBounds {
  double upper = 1.0;
  double lower = 0.0;
  bool swapped = false;
};

// Clamps both bounds into [0,1] and swaps them when L exceeds U by at most
// kBoundReconcileTolerance (with a warning). Larger gaps throw
// InvalidArgument; NaN bounds throw NumericError.
ReconciledBounds reconcile_bounds(double upper, double lower);

// The value a bound reports downstream: the exact re-evaluation when an
// exact indicator was available, the surrogate objective otherwise.
double reported_bound(const BoundResult& result);

// Certified iff U <= eps, Decertified iff eps < L, CannotDecide otherwise.
Verdict verdict(double upper, double lower, double tolerance);

struct SweepPoint {
  double mean_value = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  bool failed = false;
  std::string failure;
};

struct RegionCell {
  std::size_t point = 0;  // index into SweepResult::points
  double tolerance = 0.0;
  Verdict verdict = Verdict::CannotDecide;

  bool operator==(const RegionCell&) const = default;
};

struct SweepResult {
  std::size_t design_dim = 0;  // 0-based
  std::vector<SweepPoint> points;
  std::vector<double> tolerances;
  std::vector<RegionCell> regions;  // point-major, failed points skipped
};

struct SweepSpec {
  std::size_t design_dim = 0;  // 0-based
  std::vector<double> mean_grid;
  double other_mean = 0.5;
  std::vector<double> tolerances{0.01, 0.05, 0.1, 0.2, 0.5};
};

// Everything but the mean constraints: the sweep rebuilds those per grid
// value.
struct SweepContext {
  std::shared_ptr<const DifferentiableScore> surrogate;
  std::optional<IndicatorFn> exact_indicator;
  double penalty = 1e3;
  SolverConfig solver;
};

// Upper and lower bounds with E[x_design] = g and E[x_d] = other_mean for
// every other d, at each grid value g. A failing grid point is recorded and
// the sweep moves on. Uses the exact bound when an exact indicator exists.
SweepResult design_sweep(const SweepSpec& spec, const SweepContext& context);

// Region cells recomputed from the stored bounds.
std::vector<RegionCell> classify_regions(const std::vector<SweepPoint>& points,
                                         const std::vector<double>& tolerances);

// design_dim,mean_value,U,L (design_dim 1-based)
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
// design_dim,mean_value,tolerance,verdict
void write_regions_csv(const std::filesystem::path& path, const SweepResult& result);

struct BoundRow {
  double threshold = 0.0;
  BoundResult result;
};

// threshold,direction,bound,exact_bound,max_residual,restarts_feasible
void write_bounds_csv(const std::filesystem::path& path, const std::vector<BoundRow>& rows);

}  // namespace ouq
