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
#include <filesystem>
#include <vector>

#include "ouq/distributions.hpp"
#include "ouq/measures.hpp"
#include "ouq/response.hpp"

namespace ouq {

struct McEstimate {
  double estimate = 0.0;
  std::size_t samples = 0;
  double standard_error = 0.0;  // sqrt(p(1-p)/N)
};

// PoF under a fully specified truth, LHS draws (one per stratum) pushed
// through the truth's inverse CDFs.
McEstimate monte_carlo_pof(const ProductDistribution& truth, const IndicatorFn& indicator,
                           std::size_t samples, std::uint64_t seed);

// Mean response under the truth, same sampling scheme.
double monte_carlo_mean(const ProductDistribution& truth, const ResponseModel& response,
                        std::size_t samples, std::uint64_t seed);

struct OscillationSearch {
  // Grid {0, 1/levels, ..., 1} along each coordinate, so refining by a
  // factor of two only adds candidates.
  std::size_t levels = 32;
  std::size_t base_points = 256;  // random base points
  std::uint64_t seed = 0;
};

// Per-coordinate oscillation osc_d = max |F(x) - F(x')| over x, x' that
// differ only in coordinate d, searched on a grid along d from random
// base points.
std::vector<double> estimate_oscillations(const ResponseModel& response,
                                          const BoxDomain& domain,
                                          const OscillationSearch& search);

struct ComBound {
  double mean_response = 0.0;
  std::vector<double> oscillations;
  double diameter_squared = 0.0;
  double bound = 1.0;
};

// McDiarmid: P[F >= Y_T] <= exp(-2 (Y_T - E[F])_+^2 / D^2), D^2 = sum osc_d^2;
// 1 when Y_T <= E[F].
double mcdiarmid_from_diameter(double mean_response, double threshold,
                               double diameter_squared);

ComBound mcdiarmid_bound(const ResponseModel& response, const BoxDomain& domain,
                         double mean_response, double threshold,
                         const OscillationSearch& search = {});

// Same, reusing precomputed oscillations (the search is threshold-free).
ComBound mcdiarmid_bound(std::vector<double> oscillations, double mean_response,
                         double threshold);

struct ComparisonRow {
  double threshold = 0.0;
  McEstimate mc;
  double com = 1.0;
  double upper = 0.0;
  double lower = 0.0;
};

// threshold,mc_estimate,mc_se,com_bound,ouq_upper,ouq_lower
void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows);

}  // namespace ouq
