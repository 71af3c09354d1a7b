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

#include "ouq/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ouq/error.hpp"
#include "ouq/surrogate.hpp"

namespace ouq {
namespace {

// Faces of the box that coincide with the unit cube impose nothing.
bool InteriorLower(double lower) { return lower > 0.0; }
bool InteriorUpper(double upper) { return upper < 1.0; }

}  // namespace

MomentConstraint MomentConstraint::mean(std::size_t coordinate, double target) {
  return raw_moment(coordinate, 1, target);
}

MomentConstraint MomentConstraint::raw_moment(std::size_t coordinate, int order,
                                              double target) {
  MomentConstraint c;
  c.kind = ConstraintKind::Moment;
  c.coordinate = coordinate;
  c.order = order;
  c.target = target;
  return c;
}

MomentConstraint MomentConstraint::partial(std::size_t coordinate, int order,
                                           double target, BoxDomain subdomain) {
  MomentConstraint c = raw_moment(coordinate, order, target);
  c.subdomain = std::move(subdomain);
  return c;
}

MomentConstraint MomentConstraint::mass(BoxDomain subdomain, double target) {
  MomentConstraint c;
  c.kind = ConstraintKind::SubdomainMass;
  c.target = target;
  c.subdomain = std::move(subdomain);
  return c;
}

bool in_subdomain(const BoxDomain& box, PointView x) {
  for (std::size_t k = 0; k < box.dimension(); ++k) {
    if (x[k] < box.lower[k]) return false;
    if (InteriorUpper(box.upper[k]) ? x[k] >= box.upper[k] : x[k] > box.upper[k]) {
      return false;
    }
  }
  return true;
}

double smooth_subdomain(const BoxDomain& box, PointView x, double sharpness) {
  double s = 1.0;
  for (std::size_t k = 0; k < box.dimension(); ++k) {
    if (InteriorLower(box.lower[k])) s *= sigmoid(sharpness * (x[k] - box.lower[k]));
    if (InteriorUpper(box.upper[k])) s *= sigmoid(sharpness * (box.upper[k] - x[k]));
  }
  return s;
}

double MomentConstraint::integrand(PointView x, bool smooth, double sharpness) const {
  double s = 1.0;
  if (subdomain) {
    s = smooth ? smooth_subdomain(*subdomain, x, sharpness)
               : (in_subdomain(*subdomain, x) ? 1.0 : 0.0);
  }
  if (kind == ConstraintKind::SubdomainMass) return s;
  return std::pow(x[coordinate], order) * s;
}

double MomentConstraint::integrand_gradient(PointView x, std::span<double> gradient,
                                            double sharpness) const {
  std::fill(gradient.begin(), gradient.end(), 0.0);
  double s = 1.0;
  if (subdomain) {
    // d log S / d x_k is a sum of (1 - sigma) terms over the active faces.
    const BoxDomain& box = *subdomain;
    for (std::size_t k = 0; k < box.dimension(); ++k) {
      if (InteriorLower(box.lower[k])) {
        const double a = sigmoid(sharpness * (x[k] - box.lower[k]));
        s *= a;
        gradient[k] += sharpness * (1.0 - a);
      }
      if (InteriorUpper(box.upper[k])) {
        const double b = sigmoid(sharpness * (box.upper[k] - x[k]));
        s *= b;
        gradient[k] -= sharpness * (1.0 - b);
      }
    }
  }
  if (kind == ConstraintKind::SubdomainMass) {
    for (double& g : gradient) g *= s;
    return s;
  }
  const double xd = x[coordinate];
  const double power = std::pow(xd, order);
  const double value = power * s;
  for (double& g : gradient) g *= value;
  gradient[coordinate] += order * std::pow(xd, order - 1) * s;
  return value;
}

std::string MomentConstraint::describe() const {
  std::ostringstream os;
  if (kind == ConstraintKind::SubdomainMass) {
    os << "mass";
  } else {
    os << "E[x" << coordinate + 1 << "^" << order << "]";
  }
  if (subdomain) {
    os << " on [";
    for (std::size_t k = 0; k < subdomain->dimension(); ++k) {
      if (k) os << "x";
      os << subdomain->lower[k] << "," << subdomain->upper[k];
    }
    os << "]";
  }
  os << " = " << target;
  return os.str();
}

void AdmissibleSet::validate() const {
  domain.validate();
  for (const auto& c : constraints) {
    if (c.kind == ConstraintKind::Moment) {
      if (c.coordinate >= domain.dimension()) {
        throw InvalidArgument("constraint coordinate out of range: " + c.describe());
      }
      if (c.order < 1) throw InvalidArgument("constraint order must be >= 1");
    }
    if (c.subdomain) {
      c.subdomain->validate();
      if (c.subdomain->dimension() != domain.dimension()) {
        throw InvalidArgument("subdomain dimension mismatch: " + c.describe());
      }
      for (std::size_t k = 0; k < domain.dimension(); ++k) {
        if (c.subdomain->lower[k] < domain.lower[k] || c.subdomain->upper[k] > domain.upper[k]) {
          throw InvalidArgument("subdomain not inside the domain: " + c.describe());
        }
      }
    } else if (c.kind == ConstraintKind::SubdomainMass) {
      throw InvalidArgument("subdomain_mass constraint needs a subdomain");
    }
    if (!std::isfinite(c.target)) throw InvalidArgument("constraint target not finite");
  }
}

bool AdmissibleSet::targets_attainable() const {
  for (const auto& c : constraints) {
    // Every integrand maps the unit cube into [0,1] and reaches both ends
    // (points outside S give 0).
    if (c.target < 0.0 || c.target > 1.0) return false;
  }
  return true;
}

PenaltyWeights PenaltyWeights::uniform(std::size_t num_constraints, double lambda) {
  return {lambda, std::vector<double>(num_constraints, lambda)};
}

void PenaltyWeights::validate(std::size_t num_constraints) const {
  if (constraint.size() != num_constraints) {
    throw InvalidArgument("PenaltyWeights: expected " + std::to_string(num_constraints) +
                          " constraint weights");
  }
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(normalization) || !std::all_of(constraint.begin(), constraint.end(), ok)) {
    throw InvalidArgument("PenaltyWeights: weights must be positive and finite");
  }
}

double residual(const MomentConstraint& constraint, const WeightedPoints& measure,
                bool smooth, double sharpness) {
  double sum = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    sum += measure.weights[i] * constraint.integrand(measure.point(i), smooth, sharpness);
  }
  return sum - constraint.target;
}

double residual(const MomentConstraint& constraint, const DiscreteMeasure& measure,
                bool smooth, double sharpness) {
  return residual(constraint, WeightedPoints::of(measure), smooth, sharpness);
}

double penalty_term(const AdmissibleSet& set, const PenaltyWeights& weights,
                    const WeightedPoints& measure, bool smooth, double sharpness) {
  weights.validate(set.num_constraints());
  double total = 0.0;
  for (double t : measure.weights) total += t;
  double penalty = weights.normalization * (total - 1.0) * (total - 1.0);
  for (std::size_t j = 0; j < set.num_constraints(); ++j) {
    const double r = residual(set.constraints[j], measure, smooth, sharpness);
    penalty += weights.constraint[j] * r * r;
  }
  return penalty;
}

double penalty_term(const AdmissibleSet& set, const PenaltyWeights& weights,
                    const DiscreteMeasure& measure, bool smooth, double sharpness) {
  return penalty_term(set, weights, WeightedPoints::of(measure), smooth, sharpness);
}

double max_abs_residual(const AdmissibleSet& set, const WeightedPoints& measure) {
  double worst = 0.0;
  for (const auto& c : set.constraints) {
    worst = std::max(worst, std::abs(residual(c, measure, false)));
  }
  return worst;
}

AdmissibleSet build_case_constraints(const CaseSpec& spec, const ProductDistribution& truth) {
  const std::size_t m = truth.dimension();
  AdmissibleSet set{BoxDomain::unit(m), {}};
  switch (spec.kind) {
    case CaseKind::Mean:
      for (std::size_t d = 0; d < m; ++d) {
        set.constraints.push_back(MomentConstraint::mean(d, moment(truth, 1, d)));
      }
      break;
    case CaseKind::MomentsUpTo:
      if (spec.max_order < 1) throw InvalidArgument("moments case: max_order must be >= 1");
      for (std::size_t d = 0; d < m; ++d) {
        for (int j = 1; j <= spec.max_order; ++j) {
          set.constraints.push_back(MomentConstraint::raw_moment(d, j, moment(truth, j, d)));
        }
      }
      break;
    case CaseKind::Partial:
      for (std::size_t d = 0; d < m; ++d) {
        set.constraints.push_back(MomentConstraint::mean(d, moment(truth, 1, d)));
      }
      for (std::size_t d : spec.partial_dims) {
        if (d >= m) throw InvalidArgument("partial case: dimension out of range");
        BoxDomain box = BoxDomain::unit(m);
        box.lower[d] = spec.sub_lower;
        box.upper[d] = spec.sub_upper;
        const auto pm = partial_moment(truth, 1, d, spec.sub_lower, spec.sub_upper);
        set.constraints.push_back(MomentConstraint::mass(box, pm.mass));
        set.constraints.push_back(MomentConstraint::partial(d, 1, pm.moment, box));
      }
      break;
  }
  set.validate();
  return set;
}

}  // namespace ouq
