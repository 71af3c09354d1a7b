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
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace ouq {

using Point = std::vector<double>;
using PointView = std::span<const double>;
using ScalarFn = std::function<double(PointView)>;
using IndicatorFn = std::function<bool(PointView)>;

inline constexpr double kMeasureTolerance = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Axis-aligned box. All problems in this library work on the normalized
// unit cube, but the type keeps explicit bounds.
struct BoxDomain {
  std::vector<double> lower;
  std::vector<double> upper;

  static BoxDomain unit(std::size_t dimension);

  std::size_t dimension() const { return lower.size(); }
  bool contains(PointView x) const;
  void validate() const;
};

// Convex combination of Dirac masses on [0,1]^m. Points are stored
// row-major. Immutable once constructed.
class DiscreteMeasure {
 public:
  // Throws InvalidArgument unless weights are nonnegative and sum to one
  // within kMeasureTolerance and every coordinate lies in [0,1].
  DiscreteMeasure(std::size_t dimension, std::vector<double> points,
                  std::vector<double> weights);

  static DiscreteMeasure dirac(Point x);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return weights_.size(); }
  PointView point(std::size_t i) const {
    return {points_.data() + i * dimension_, dimension_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> flat_points() const { return points_; }

  // Winkler bound on the support size for K constraints.
  bool within_support_bound(std::size_t num_constraints) const {
    return size() >= 1 && size() <= num_constraints + 1;
  }

 private:
  std::size_t dimension_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

// 1 iff z lies in the half-open set [set_lower, set_upper).
bool dirac_membership(double z, double set_lower, double set_upper = kInf);

// Sum of t_i f(X_i). Throws NumericError if f returns NaN.
double expectation(const DiscreteMeasure& measure, const ScalarFn& f);

// Sum of t_i * indicator(X_i).
double pof_under_measure(const DiscreteMeasure& measure,
                         const IndicatorFn& indicator);

// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> raw_weights);

// One row per support point: x1..xm,weight.
void write_measure_csv(std::ostream& out, const DiscreteMeasure& measure);
DiscreteMeasure read_measure_csv(std::istream& in);

}  // namespace ouq
