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

#include "ouq/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "ouq/csv.hpp"
#include "ouq/error.hpp"

namespace ouq {

McEstimate monte_carlo_pof(const ProductDistribution& truth, const IndicatorFn& indicator,
                           std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("monte_carlo_pof: N must be >= 1");
  const Matrix draws = lhs_sample(truth, {samples, 1, seed});
  std::size_t hits = 0;
  for (std::size_t r = 0; r < draws.rows(); ++r) {
    if (indicator(draws.row(r))) ++hits;
  }
  McEstimate out;
  out.samples = samples;
  out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  out.standard_error =
      std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

double monte_carlo_mean(const ProductDistribution& truth, const ResponseModel& response,
                        std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("monte_carlo_mean: N must be >= 1");
  const Matrix draws = lhs_sample(truth, {samples, 1, seed});
  double sum = 0.0;
  for (std::size_t r = 0; r < draws.rows(); ++r) {
    const double y = response.evaluate(draws.row(r));
    if (!std::isfinite(y)) throw NumericError("monte_carlo_mean: non-finite response");
    sum += y;
  }
  return sum / static_cast<double>(samples);
}

std::vector<double> estimate_oscillations(const ResponseModel& response,
                                          const BoxDomain& domain,
                                          const OscillationSearch& search) {
  domain.validate();
  if (search.levels < 2 || search.base_points == 0) {
    throw InvalidArgument("estimate_oscillations: need >= 2 levels and >= 1 base point");
  }
  const std::size_t m = domain.dimension();
  std::mt19937_64 rng(search.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> osc(m, 0.0);
  Point x(m);
  for (std::size_t b = 0; b < search.base_points; ++b) {
    for (std::size_t d = 0; d < m; ++d) {
      x[d] = domain.lower[d] + unit(rng) * (domain.upper[d] - domain.lower[d]);
    }
    for (std::size_t d = 0; d < m; ++d) {
      const double keep = x[d];
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t k = 0; k <= search.levels; ++k) {
        x[d] = domain.lower[d] + (domain.upper[d] - domain.lower[d]) *
                                     static_cast<double>(k) /
                                     static_cast<double>(search.levels);
        const double y = response.evaluate(x);
        if (!std::isfinite(y)) {
          throw NumericError("estimate_oscillations: non-finite response");
        }
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
      x[d] = keep;
      osc[d] = std::max(osc[d], hi - lo);
    }
  }
  return osc;
}

double mcdiarmid_from_diameter(double mean_response, double threshold,
                               double diameter_squared) {
  const double margin = threshold - mean_response;
  if (margin <= 0.0) return 1.0;
  if (diameter_squared <= 0.0) return 0.0;
  return std::clamp(std::exp(-2.0 * margin * margin / diameter_squared), 0.0, 1.0);
}

ComBound mcdiarmid_bound(std::vector<double> oscillations, double mean_response,
                         double threshold) {
  ComBound out;
  out.mean_response = mean_response;
  out.oscillations = std::move(oscillations);
  for (double o : out.oscillations) out.diameter_squared += o * o;
  out.bound = mcdiarmid_from_diameter(mean_response, threshold, out.diameter_squared);
  return out;
}

ComBound mcdiarmid_bound(const ResponseModel& response, const BoxDomain& domain,
                         double mean_response, double threshold,
                         const OscillationSearch& search) {
  return mcdiarmid_bound(estimate_oscillations(response, domain, search), mean_response,
                         threshold);
}

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  csv::write_row(out, {"threshold", "mc_estimate", "mc_se", "com_bound", "ouq_upper",
                       "ouq_lower"});
  for (const auto& r : rows) {
    csv::write_row(out, {csv::format(r.threshold), csv::format(r.mc.estimate),
                         csv::format(r.mc.standard_error), csv::format(r.com),
                         csv::format(r.upper), csv::format(r.lower)});
  }
}

}  // namespace ouq
