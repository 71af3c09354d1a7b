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

#include "ouq/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ouq/error.hpp"

namespace ouq {
namespace {

const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);

double Phi(double z) { return boost::math::cdf(kStdNormal, z); }
double PhiInv(double p) { return boost::math::quantile(kStdNormal, p); }

// Mass of N(loc, scale) on [0,1].
double Normalizer(const GaussianComponent& g) {
  return Phi((1.0 - g.loc) / g.scale) - Phi((0.0 - g.loc) / g.scale);
}

double ComponentPdf(const GaussianComponent& g, double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  const double z = (x - g.loc) / g.scale;
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z) / (g.scale * Normalizer(g));
}

double ComponentCdf(const GaussianComponent& g, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lo = Phi(-g.loc / g.scale);
  return (Phi((x - g.loc) / g.scale) - lo) / Normalizer(g);
}

double ComponentQuantile(const GaussianComponent& g, double u) {
  const double lo = Phi(-g.loc / g.scale);
  const double p = lo + u * Normalizer(g);
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double x = g.loc + g.scale * PhiInv(p);
  return std::clamp(x, 0.0, 1.0);
}

void ValidateComponent(const GaussianComponent& g) {
  if (!(g.scale > 0.0) || !std::isfinite(g.loc)) {
    throw InvalidArgument("truncated Gaussian: scale must be positive");
  }
}

std::mt19937_64 MakeRng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), 0x6f7571u};
  return std::mt19937_64(seq);
}

// Integral of x^order * pdf(x) over [lower, upper].
double IntegrateMoment(const UnivariateLaw& law, int order, double lower,
                       double upper) {
  auto integrand = [&](double x) { return std::pow(x, order) * law.pdf(x); };
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          integrand, lower, upper, 15, 1e-14, &error);
  if (!(error <= kQuadratureTolerance) || !std::isfinite(value)) {
    throw NumericError("quadrature did not converge (error estimate " +
                       std::to_string(error) + ")");
  }
  return value;
}

}  // namespace

std::string to_string(LawKind kind) {
  switch (kind) {
    case LawKind::Uniform:
      return "uniform";
    case LawKind::TruncatedGaussian:
      return "truncated_gaussian";
    case LawKind::BimodalMixture:
      return "bimodal_mixture";
  }
  return "unknown";
}

UnivariateLaw::UnivariateLaw(LawKind kind, GaussianComponent first,
                             GaussianComponent second, double first_weight)
    : kind_(kind), first_(first), second_(second), first_weight_(first_weight) {}

UnivariateLaw UnivariateLaw::uniform() {
  return UnivariateLaw(LawKind::Uniform, {}, {}, 1.0);
}

UnivariateLaw UnivariateLaw::truncated_gaussian(double loc, double scale) {
  GaussianComponent g{loc, scale};
  ValidateComponent(g);
  return UnivariateLaw(LawKind::TruncatedGaussian, g, g, 1.0);
}

UnivariateLaw UnivariateLaw::bimodal(GaussianComponent first,
                                     GaussianComponent second,
                                     double first_weight) {
  ValidateComponent(first);
  ValidateComponent(second);
  if (!(first_weight > 0.0 && first_weight < 1.0)) {
    throw InvalidArgument("bimodal mixture: weight must lie in (0,1)");
  }
  return UnivariateLaw(LawKind::BimodalMixture, first, second, first_weight);
}

double UnivariateLaw::pdf(double x) const {
  switch (kind_) {
    case LawKind::Uniform:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case LawKind::TruncatedGaussian:
      return ComponentPdf(first_, x);
    case LawKind::BimodalMixture:
      return first_weight_ * ComponentPdf(first_, x) +
             (1.0 - first_weight_) * ComponentPdf(second_, x);
  }
  return 0.0;
}

double UnivariateLaw::cdf(double x) const {
  switch (kind_) {
    case LawKind::Uniform:
      return std::clamp(x, 0.0, 1.0);
    case LawKind::TruncatedGaussian:
      return ComponentCdf(first_, x);
    case LawKind::BimodalMixture:
      return first_weight_ * ComponentCdf(first_, x) +
             (1.0 - first_weight_) * ComponentCdf(second_, x);
  }
  return 0.0;
}

double UnivariateLaw::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind_) {
    case LawKind::Uniform:
      return u;
    case LawKind::TruncatedGaussian:
      return ComponentQuantile(first_, u);
    case LawKind::BimodalMixture: {
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < u) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
  }
  return u;
}

ProductDistribution::ProductDistribution(std::vector<UnivariateLaw> laws)
    : laws_(std::move(laws)) {
  if (laws_.empty()) throw InvalidArgument("ProductDistribution: no coordinates");
}

ProductDistribution ProductDistribution::iid(const UnivariateLaw& law,
                                             std::size_t dimension) {
  return ProductDistribution(std::vector<UnivariateLaw>(dimension, law));
}

Matrix lhs_sample(const BoxDomain& domain, const LhsConfig& config) {
  domain.validate();
  if (config.strata == 0 || config.per_stratum == 0) {
    throw InvalidArgument("lhs_sample: strata and per_stratum must be >= 1");
  }
  if (config.per_stratum > config.max_total / config.strata) {
    throw InvalidArgument("lhs_sample: L*N_L exceeds the configured maximum of " +
                          std::to_string(config.max_total));
  }
  const std::size_t n = config.total();
  const std::size_t m = domain.dimension();
  const double strata = static_cast<double>(config.strata);
  auto rng = MakeRng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Matrix out(n, m);
  std::vector<std::size_t> order(n);
  for (std::size_t d = 0; d < m; ++d) {
    const double lo = domain.lower[d];
    const double width = domain.upper[d] - lo;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t bin = k / config.per_stratum;
      const double b = static_cast<double>(bin);
      const double edge_lo = lo + width * (b / strata);
      const double edge_hi = lo + width * ((b + 1.0) / strata);
      double x = lo + width * ((b + unit(rng)) / strata);
      // Rounding must not push a sample into the neighbouring bin.
      if (x >= edge_hi && bin + 1 < config.strata) {
        x = std::nextafter(edge_hi, edge_lo);
      }
      x = std::clamp(x, edge_lo, domain.upper[d]);
      out(order[k], d) = x;
    }
  }
  return out;
}

Matrix lhs_sample(const ProductDistribution& dist, const LhsConfig& config) {
  Matrix design = lhs_sample(BoxDomain::unit(dist.dimension()), config);
  for (std::size_t r = 0; r < design.rows(); ++r) {
    for (std::size_t d = 0; d < dist.dimension(); ++d) {
      design(r, d) = dist.law(d).quantile(design(r, d));
    }
  }
  return design;
}

Matrix sample_iid(const ProductDistribution& dist, std::size_t n,
                  std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample_iid: n must be >= 1");
  auto rng = MakeRng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix out(n, dist.dimension());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t d = 0; d < dist.dimension(); ++d) {
      out(r, d) = dist.law(d).quantile(unit(rng));
    }
  }
  return out;
}

double moment(const ProductDistribution& dist, int order, std::size_t coordinate) {
  if (order < 1) throw InvalidArgument("moment: order must be >= 1");
  if (coordinate >= dist.dimension()) throw InvalidArgument("moment: coordinate out of range");
  const auto& law = dist.law(coordinate);
  if (law.kind() == LawKind::Uniform) return 1.0 / (order + 1.0);
  return IntegrateMoment(law, order, 0.0, 1.0);
}

PartialMoment partial_moment(const ProductDistribution& dist, int order,
                             std::size_t coordinate, double sub_lower,
                             double sub_upper) {
  if (order < 1) throw InvalidArgument("partial_moment: order must be >= 1");
  if (coordinate >= dist.dimension()) {
    throw InvalidArgument("partial_moment: coordinate out of range");
  }
  if (!(sub_lower < sub_upper)) {
    throw InvalidArgument("partial_moment: empty subinterval");
  }
  if (sub_lower < 0.0 || sub_upper > 1.0) {
    throw InvalidArgument("partial_moment: subinterval must lie in [0,1]");
  }
  const auto& law = dist.law(coordinate);
  PartialMoment out;
  out.mass = law.cdf(sub_upper) - law.cdf(sub_lower);
  if (law.kind() == LawKind::Uniform) {
    out.moment = (std::pow(sub_upper, order + 1) - std::pow(sub_lower, order + 1)) /
                 (order + 1.0);
  } else {
    out.moment = IntegrateMoment(law, order, sub_lower, sub_upper);
  }
  return out;
}

}  // namespace ouq
