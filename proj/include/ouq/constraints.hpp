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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ouq/distributions.hpp"
#include "ouq/measures.hpp"

namespace ouq {

inline constexpr double kDefaultSharpness = 200.0;
inline constexpr double kDefaultPenalty = 1e3;

enum class ConstraintKind { Moment, SubdomainMass };

// Equality constraint  sum_i t_i g(X_i) = target  with
//   g(x) = x_d^order * 1_S(x)   (Moment; 1_S = 1 without a subdomain)
//   g(x) = 1_S(x)               (SubdomainMass)
// The exact 1_S uses [lower, upper) per coordinate, closed at the upper
// face of the unit cube. The smooth 1_S replaces each interior face by a
// logistic ramp of the given sharpness.
struct MomentConstraint {
  ConstraintKind kind = ConstraintKind::Moment;
  std::size_t coordinate = 0;  // zero-based
  int order = 1;
  double target = 0.0;
  std::optional<BoxDomain> subdomain;

  static MomentConstraint mean(std::size_t coordinate, double target);
  static MomentConstraint raw_moment(std::size_t coordinate, int order, double target);
  static MomentConstraint partial(std::size_t coordinate, int order, double target,
                                  BoxDomain subdomain);
  static MomentConstraint mass(BoxDomain subdomain, double target);

  double integrand(PointView x, bool smooth, double sharpness = kDefaultSharpness) const;
  // Gradient of the smooth integrand; returns its value.
  double integrand_gradient(PointView x, std::span<double> gradient,
                            double sharpness = kDefaultSharpness) const;

  std::string describe() const;
};

// Subdomain indicator on a box.
bool in_subdomain(const BoxDomain& box, PointView x);
double smooth_subdomain(const BoxDomain& box, PointView x, double sharpness);

struct AdmissibleSet {
  BoxDomain domain;
  std::vector<MomentConstraint> constraints;

  std::size_t num_constraints() const { return constraints.size(); }
  std::size_t max_support() const { return constraints.size() + 1; }
  void validate() const;
  // False when some target lies outside the range its integrand can reach
  // on the unit cube, which makes the set empty.
  bool targets_attainable() const;
};

struct PenaltyWeights {
  double normalization = kDefaultPenalty;  // lambda_0
  std::vector<double> constraint;          // lambda_1..lambda_K

  static PenaltyWeights uniform(std::size_t num_constraints, double lambda = kDefaultPenalty);
  void validate(std::size_t num_constraints) const;
};

// Weighted support points with weights not necessarily on the simplex.
struct WeightedPoints {
  std::size_t dimension = 0;
  std::span<const double> points;  // row-major, size() * dimension
  std::span<const double> weights;

  std::size_t size() const { return weights.size(); }
  PointView point(std::size_t i) const { return points.subspan(i * dimension, dimension); }
  static WeightedPoints of(const DiscreteMeasure& m) {
    return {m.dimension(), m.flat_points(), m.weights()};
  }
};

double residual(const MomentConstraint& constraint, const WeightedPoints& measure,
                bool smooth, double sharpness = kDefaultSharpness);
double residual(const MomentConstraint& constraint, const DiscreteMeasure& measure,
                bool smooth, double sharpness = kDefaultSharpness);

// lambda_0 (sum t - 1)^2 + sum_j lambda_j residual_j^2.
double penalty_term(const AdmissibleSet& set, const PenaltyWeights& weights,
                    const WeightedPoints& measure, bool smooth,
                    double sharpness = kDefaultSharpness);
double penalty_term(const AdmissibleSet& set, const PenaltyWeights& weights,
                    const DiscreteMeasure& measure, bool smooth,
                    double sharpness = kDefaultSharpness);

// Largest |residual| over the constraints, exact indicators.
double max_abs_residual(const AdmissibleSet& set, const WeightedPoints& measure);

enum class CaseKind { Mean, MomentsUpTo, Partial };

struct CaseSpec {
  CaseKind kind = CaseKind::Mean;
  int max_order = 1;                     // MomentsUpTo
  std::vector<std::size_t> partial_dims;  // Partial, zero-based
  double sub_lower = 0.5;
  double sub_upper = 1.0;
};

// Targets from the truth law:
//   Mean         one first-moment constraint per coordinate (K = m)
//   MomentsUpTo  orders 1..max_order per coordinate (K = m * max_order)
//   Partial      Mean plus, per selected coordinate d, the pair
//                nu(S_d) = p_d and  int_{S_d} x_d dnu = partial expectation,
//                with S_d = [sub_lower, sub_upper] along d.
AdmissibleSet build_case_constraints(const CaseSpec& spec, const ProductDistribution& truth);

}  // namespace ouq
