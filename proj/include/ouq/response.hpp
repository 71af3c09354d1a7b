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

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "ouq/matrix.hpp"
#include "ouq/measures.hpp"

namespace ouq {

// Johnson-Cook flow-stress parameters. Stresses in MPa.
struct JohnsonCookParams {
  double A = 0.0;      // yield stress
  double B = 0.0;      // strain-hardening modulus
  double n = 0.0;      // strain-hardening exponent
  double C = 0.0;      // strain-rate coefficient
  double m_exp = 0.0;  // thermal-softening exponent
};

// Min-max box used to normalize the five parameters to [0,1]^5, in the
// order A, B, n, C, m.
struct JohnsonCookBounds {
  std::array<double, 5> lower;
  std::array<double, 5> upper;

  // Experimental 95% intervals for AZ31B magnesium.
  static JohnsonCookBounds az31b();
};

struct FixedMaterialParams {
  double ref_strain_rate = 1e-3;    // 1/s
  double ref_temperature = 298.0;   // K
  double melt_temperature = 905.0;  // K
};

JohnsonCookParams denormalize(PointView normalized, const JohnsonCookBounds& bounds);
Point normalize(const JohnsonCookParams& params, const JohnsonCookBounds& bounds);

// sigma = [A + B eps^n][1 + C ln(rate/rate0)][1 - T*^m], T* = (T-T0)/(Tm-T0).
// Requires eps >= 0, rate > 0 and T0 <= T <= Tm. A negative result (rate far
// below the reference) is returned as-is with a logged warning.
double jc_flow_stress(const JohnsonCookParams& p, const FixedMaterialParams& fixed,
                      double plastic_strain, double strain_rate, double temperature);

// Scalar system response F: [0,1]^m -> R.
class ResponseModel {
 public:
  virtual ~ResponseModel() = default;
  virtual std::size_t dimension() const = 0;
  virtual double evaluate(PointView x) const = 0;
};

// Adapts a plain function, e.g. a single-coordinate toy response.
class FunctionResponse final : public ResponseModel {
 public:
  FunctionResponse(std::size_t dimension, std::function<double(PointView)> fn)
      : dimension_(dimension), fn_(std::move(fn)) {}
  std::size_t dimension() const override { return dimension_; }
  double evaluate(PointView x) const override { return fn_(x); }

 private:
  std::size_t dimension_;
  std::function<double(PointView)> fn_;
};

struct DeflectionModelConfig {
  JohnsonCookBounds bounds = JohnsonCookBounds::az31b();
  FixedMaterialParams fixed{};
  double plastic_strain = 0.2;
  double strain_rate = 1e4;    // 1/s
  double temperature = 350.0;  // K
  double exponent = 2.0;       // gamma
  double anchor_deflection = 1.05;  // cm at x = (0.5,...,0.5)
};

// Analytic stand-in for the impact simulation: y = kappa / sigma(x)^gamma,
// with sigma the flow stress at a representative high-rate state and kappa
// fixed by the anchor deflection at the centre of the box. Deflection in cm.
class SyntheticDeflection final : public ResponseModel {
 public:
  explicit SyntheticDeflection(DeflectionModelConfig config = {});

  std::size_t dimension() const override { return 5; }
  double evaluate(PointView x) const override;

  double flow_stress(PointView x) const;
  double kappa() const { return kappa_; }
  const DeflectionModelConfig& config() const { return config_; }

 private:
  DeflectionModelConfig config_;
  double kappa_;
};

inline double synthetic_deflection(PointView x, const DeflectionModelConfig& config = {}) {
  return SyntheticDeflection(config).evaluate(x);
}

// Exact performance indicator: 1 iff F(x) >= threshold.
class ThresholdIndicator {
 public:
  ThresholdIndicator(std::shared_ptr<const ResponseModel> response, double threshold);

  bool operator()(PointView x) const;
  double threshold() const { return threshold_; }
  const ResponseModel& response() const { return *response_; }
  std::shared_ptr<const ResponseModel> response_ptr() const { return response_; }

 private:
  std::shared_ptr<const ResponseModel> response_;
  double threshold_;
};

// Tabulated (x, y) pairs: CSV header x1..xm,y.
struct ResponseTable {
  Matrix inputs;
  std::vector<double> outputs;
};

ResponseTable evaluate_table(const ResponseModel& response, const Matrix& inputs);
ResponseTable read_response_table(const std::filesystem::path& path);
void write_response_table(const std::filesystem::path& path, const ResponseTable& table);

}  // namespace ouq
