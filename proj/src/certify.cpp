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

#include "ouq/certify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ouq/csv.hpp"
#include "ouq/error.hpp"
#include "ouq/log.hpp"

namespace ouq {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Certified:
      return "certified";
    case Verdict::Decertified:
      return "decertified";
    case Verdict::CannotDecide:
      return "cannot_decide";
  }
  return "unknown";
}

double reported_bound(const BoundResult& result) {
  return result.exact_available ? result.exact_bound : result.bound;
}

ReconciledBounds reconcile_bounds(double upper, double lower) {
  if (std::isnan(upper) || std::isnan(lower)) {
    throw NumericError("reconcile_bounds: NaN bound");
  }
  ReconciledBounds out{std::clamp(upper, 0.0, 1.0), std::clamp(lower, 0.0, 1.0), false};
  if (out.lower > out.upper) {
    const double gap = out.lower - out.upper;
    if (gap > kBoundReconcileTolerance) {
      std::ostringstream os;
      os << "inconsistent bounds: L=" << lower << " exceeds U=" << upper << " by " << gap;
      throw InvalidArgument(os.str());
    }
    std::ostringstream os;
    os << "lower bound " << lower << " exceeds upper bound " << upper
       << " (optimizer noise); swapping";
    log::warn(os.str());
    std::swap(out.upper, out.lower);
    out.swapped = true;
  }
  return out;
}

Verdict verdict(double upper, double lower, double tolerance) {
  if (std::isnan(tolerance)) throw InvalidArgument("verdict: NaN tolerance");
  const auto b = reconcile_bounds(upper, lower);
  if (b.upper <= tolerance) return Verdict::Certified;
  if (tolerance < b.lower) return Verdict::Decertified;
  return Verdict::CannotDecide;
}

std::vector<RegionCell> classify_regions(const std::vector<SweepPoint>& points,
                                         const std::vector<double>& tolerances) {
  std::vector<RegionCell> cells;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].failed) continue;
    for (double eps : tolerances) {
      cells.push_back({i, eps, verdict(points[i].upper, points[i].lower, eps)});
    }
  }
  return cells;
}

SweepResult design_sweep(const SweepSpec& spec, const SweepContext& context) {
  if (!context.surrogate) throw InvalidArgument("design_sweep: no surrogate");
  const std::size_t m = context.surrogate->dimension();
  if (spec.design_dim >= m) throw InvalidArgument("design_sweep: design dimension out of range");
  if (spec.mean_grid.empty()) throw InvalidArgument("design_sweep: empty mean grid");
  for (double g : spec.mean_grid) {
    if (!(g >= 0.0 && g <= 1.0)) throw InvalidArgument("design_sweep: grid value outside [0,1]");
  }
  if (!(spec.other_mean >= 0.0 && spec.other_mean <= 1.0)) {
    throw InvalidArgument("design_sweep: other_mean outside [0,1]");
  }

  SweepResult result;
  result.design_dim = spec.design_dim;
  result.tolerances = spec.tolerances;
  for (double g : spec.mean_grid) {
    SweepPoint point;
    point.mean_value = g;
    try {
      OuqProblem problem;
      problem.set.domain = BoxDomain::unit(m);
      for (std::size_t d = 0; d < m; ++d) {
        problem.set.constraints.push_back(
            MomentConstraint::mean(d, d == spec.design_dim ? g : spec.other_mean));
      }
      problem.surrogate = context.surrogate;
      problem.exact_indicator = context.exact_indicator;
      problem.penalties = PenaltyWeights::uniform(m, context.penalty);
      problem.config = context.solver;

      problem.direction = Direction::Upper;
      const BoundResult upper = solve(problem);
      problem.direction = Direction::Lower;
      const BoundResult lower = solve(problem);
      if (!upper.feasible || !lower.feasible) {
        throw NumericError("no restart met the feasibility tolerance");
      }
      const auto b = reconcile_bounds(reported_bound(upper), reported_bound(lower));
      point.upper = b.upper;
      point.lower = b.lower;
    } catch (const Error& e) {
      point.failed = true;
      point.failure = e.what();
      point.upper = point.lower = std::nan("");
      log::warn("sweep point " + csv::format(g) + " failed: " + e.what());
    }
    result.points.push_back(std::move(point));
  }
  result.regions = classify_regions(result.points, result.tolerances);
  return result;
}

namespace {

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
  auto out = OpenForWrite(path);
  csv::write_row(out, {"design_dim", "mean_value", "U", "L"});
  const std::string dim = std::to_string(result.design_dim + 1);
  for (const auto& p : result.points) {
    csv::write_row(out, {dim, csv::format(p.mean_value), csv::format(p.upper),
                         csv::format(p.lower)});
  }
}

void write_regions_csv(const std::filesystem::path& path, const SweepResult& result) {
  auto out = OpenForWrite(path);
  csv::write_row(out, {"design_dim", "mean_value", "tolerance", "verdict"});
  const std::string dim = std::to_string(result.design_dim + 1);
  for (const auto& c : result.regions) {
    csv::write_row(out, {dim, csv::format(result.points[c.point].mean_value),
                         csv::format(c.tolerance), to_string(c.verdict)});
  }
}

void write_bounds_csv(const std::filesystem::path& path, const std::vector<BoundRow>& rows) {
  auto out = OpenForWrite(path);
  csv::write_row(out, {"threshold", "direction", "bound", "exact_bound", "max_residual",
                       "restarts_feasible"});
  for (const auto& r : rows) {
    csv::write_row(out, {csv::format(r.threshold), to_string(r.result.direction),
                         csv::format(r.result.bound), csv::format(r.result.exact_bound),
                         csv::format(r.result.max_residual),
                         std::to_string(r.result.restarts_feasible)});
  }
}

}  // namespace ouq
