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

#include "ouq/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "ouq/csv.hpp"
#include "ouq/error.hpp"

namespace ouq {

BoxDomain BoxDomain::unit(std::size_t dimension) {
  return {std::vector<double>(dimension, 0.0),
          std::vector<double>(dimension, 1.0)};
}

bool BoxDomain::contains(PointView x) const {
  if (x.size() != dimension()) return false;
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (!(x[d] >= lower[d] && x[d] <= upper[d])) return false;
  }
  return true;
}

void BoxDomain::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw InvalidArgument("BoxDomain: dimension must be positive and bounds consistent");
  }
  for (std::size_t d = 0; d < lower.size(); ++d) {
    if (!(lower[d] < upper[d])) {
      throw InvalidArgument("BoxDomain: lower >= upper in coordinate " +
                            std::to_string(d));
    }
  }
}

DiscreteMeasure::DiscreteMeasure(std::size_t dimension,
                                 std::vector<double> points,
                                 std::vector<double> weights)
    : dimension_(dimension),
      points_(std::move(points)),
      weights_(std::move(weights)) {
  if (dimension_ == 0) throw InvalidArgument("DiscreteMeasure: zero dimension");
  if (weights_.empty()) throw InvalidArgument("DiscreteMeasure: empty support");
  if (points_.size() != weights_.size() * dimension_) {
    throw InvalidArgument("DiscreteMeasure: points/weights size mismatch");
  }
  double total = 0.0;
  for (double t : weights_) {
    if (!(t >= 0.0 && t <= 1.0 + kMeasureTolerance)) {
      throw InvalidArgument("DiscreteMeasure: weight outside [0,1]");
    }
    total += t;
  }
  if (std::abs(total - 1.0) > kMeasureTolerance) {
    throw InvalidArgument("DiscreteMeasure: weights sum to " +
                          std::to_string(total));
  }
  for (double x : points_) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw InvalidArgument("DiscreteMeasure: coordinate outside [0,1]");
    }
  }
}

DiscreteMeasure DiscreteMeasure::dirac(Point x) {
  const std::size_t m = x.size();
  return DiscreteMeasure(m, std::move(x), {1.0});
}

bool dirac_membership(double z, double set_lower, double set_upper) {
  return z >= set_lower && z < set_upper;
}

double expectation(const DiscreteMeasure& measure, const ScalarFn& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    const double v = f(measure.point(i));
    if (std::isnan(v)) {
      throw NumericError("expectation: integrand returned NaN at support point " +
                         std::to_string(i));
    }
    sum += measure.weight(i) * v;
  }
  return sum;
}

double pof_under_measure(const DiscreteMeasure& measure,
                         const IndicatorFn& indicator) {
  double sum = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    if (indicator(measure.point(i))) sum += measure.weight(i);
  }
  return std::clamp(sum, 0.0, 1.0);
}

std::vector<double> project_to_simplex(std::span<const double> raw_weights) {
  if (raw_weights.empty()) throw InvalidArgument("project_to_simplex: empty input");
  for (double v : raw_weights) {
    if (!std::isfinite(v)) {
      throw NumericError("project_to_simplex: non-finite weight");
    }
  }
  std::vector<double> sorted(raw_weights.begin(), raw_weights.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(raw_weights.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::max(raw_weights[i] - theta, 0.0);
  }
  return out;
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& measure) {
  std::vector<std::string> header;
  for (std::size_t d = 0; d < measure.dimension(); ++d) {
    header.push_back("x" + std::to_string(d + 1));
  }
  header.emplace_back("weight");
  csv::write_row(out, header);
  for (std::size_t i = 0; i < measure.size(); ++i) {
    std::vector<std::string> row;
    for (double x : measure.point(i)) row.push_back(csv::format(x));
    row.push_back(csv::format(measure.weight(i)));
    csv::write_row(out, row);
  }
}

DiscreteMeasure read_measure_csv(std::istream& in) {
  const auto table = csv::read_numeric(in, "measure");
  if (table.header.size() < 2 || table.header.back() != "weight") {
    throw CorruptFile("measure CSV: last column must be 'weight'");
  }
  const std::size_t m = table.header.size() - 1;
  std::vector<double> points;
  std::vector<double> weights;
  for (const auto& row : table.rows) {
    points.insert(points.end(), row.begin(), row.begin() + static_cast<long>(m));
    weights.push_back(row.back());
  }
  return DiscreteMeasure(m, std::move(points), std::move(weights));
}

}  // namespace ouq
