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
#include <string>
#include <utility>
#include <vector>

#include "ouq/matrix.hpp"
#include "ouq/measures.hpp"

namespace ouq {

enum class LawKind { Uniform, TruncatedGaussian, BimodalMixture };

std::string to_string(LawKind kind);

// Gaussian restricted to [0,1] by CDF renormalization.
struct GaussianComponent {
  double loc = 0.5;
  double scale = 0.2;
};

// Univariate law supported on [0,1].
class UnivariateLaw {
 public:
  static UnivariateLaw uniform();
  static UnivariateLaw truncated_gaussian(double loc = 0.5, double scale = 0.2);
  static UnivariateLaw bimodal(GaussianComponent first = {0.25, 0.1},
                               GaussianComponent second = {0.75, 0.1},
                               double first_weight = 0.5);

  LawKind kind() const { return kind_; }
  const GaussianComponent& first() const { return first_; }
  const GaussianComponent& second() const { return second_; }
  double first_weight() const { return first_weight_; }

  double pdf(double x) const;
  double cdf(double x) const;
  // Inverse CDF on [0,1]; exact for uniform and single truncated Gaussians,
  // bracketed root-finding on the mixture CDF otherwise.
  double quantile(double u) const;

 private:
  UnivariateLaw(LawKind kind, GaussianComponent first, GaussianComponent second,
                double first_weight);

  LawKind kind_;
  GaussianComponent first_;
  GaussianComponent second_;
  double first_weight_;
};

// Independent product of univariate laws, one per coordinate.
class ProductDistribution {
 public:
  explicit ProductDistribution(std::vector<UnivariateLaw> laws);
  static ProductDistribution iid(const UnivariateLaw& law, std::size_t dimension);

  std::size_t dimension() const { return laws_.size(); }
  const UnivariateLaw& law(std::size_t d) const { return laws_.at(d); }

 private:
  std::vector<UnivariateLaw> laws_;
};

struct LhsConfig {
  std::size_t strata = 1;       // L
  std::size_t per_stratum = 1;  // N_L
  std::uint64_t seed = 0;
  std::size_t max_total = 10'000'000;

  std::size_t total() const { return strata * per_stratum; }
};

// Latin hypercube design: along every coordinate each of the L equal-width
// bins holds exactly N_L points, uniform within the bin.
Matrix lhs_sample(const BoxDomain& domain, const LhsConfig& config);

// LHS design pushed through the per-coordinate inverse CDFs of `dist`.
Matrix lhs_sample(const ProductDistribution& dist, const LhsConfig& config);

// i.i.d. draws by inverse-CDF per coordinate.
Matrix sample_iid(const ProductDistribution& dist, std::size_t n,
                  std::uint64_t seed);

inline constexpr double kQuadratureTolerance = 1e-10;

// Marginal raw moment E[x_d^order].
double moment(const ProductDistribution& dist, int order, std::size_t coordinate);

struct PartialMoment {
  double mass = 0.0;    // nu_d([lower, upper])
  double moment = 0.0;  // integral of x^order over [lower, upper]
};

PartialMoment partial_moment(const ProductDistribution& dist, int order,
                             std::size_t coordinate, double sub_lower,
                             double sub_upper);

}  // namespace ouq
