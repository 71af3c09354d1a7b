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

#include "ouq/response.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "ouq/csv.hpp"
#include "ouq/error.hpp"
#include "ouq/log.hpp"

namespace ouq {

JohnsonCookBounds JohnsonCookBounds::az31b() {
  return {{200.372, 150.682, 0.160, 0.012, 1.523},
          {249.970, 186.010, 0.324, 0.014, 1.577}};
}

JohnsonCookParams denormalize(PointView normalized, const JohnsonCookBounds& bounds) {
  if (normalized.size() != 5) {
    throw InvalidArgument("denormalize: expected 5 normalized parameters");
  }
  std::array<double, 5> v{};
  for (std::size_t k = 0; k < 5; ++k) {
    if (!(bounds.lower[k] < bounds.upper[k])) {
      throw InvalidArgument("denormalize: bounds lower >= upper");
    }
    v[k] = bounds.lower[k] + normalized[k] * (bounds.upper[k] - bounds.lower[k]);
  }
  return {v[0], v[1], v[2], v[3], v[4]};
}

Point normalize(const JohnsonCookParams& p, const JohnsonCookBounds& bounds) {
  const std::array<double, 5> v{p.A, p.B, p.n, p.C, p.m_exp};
  Point out(5);
  for (std::size_t k = 0; k < 5; ++k) {
    out[k] = (v[k] - bounds.lower[k]) / (bounds.upper[k] - bounds.lower[k]);
  }
  return out;
}

double jc_flow_stress(const JohnsonCookParams& p, const FixedMaterialParams& fixed,
                      double plastic_strain, double strain_rate, double temperature) {
  if (!(plastic_strain >= 0.0)) {
    throw InvalidArgument("jc_flow_stress: plastic strain must be >= 0");
  }
  if (!(strain_rate > 0.0)) {
    throw InvalidArgument("jc_flow_stress: strain rate must be > 0");
  }
  const double t0 = fixed.ref_temperature;
  const double tm = fixed.melt_temperature;
  if (!(tm > t0 && temperature >= t0 && temperature <= tm)) {
    throw InvalidArgument("jc_flow_stress: temperature outside [T0, Tm]");
  }
  const double hardening = p.A + p.B * std::pow(plastic_strain, p.n);
  const double rate = 1.0 + p.C * std::log(strain_rate / fixed.ref_strain_rate);
  const double homologous = (temperature - t0) / (tm - t0);
  const double softening = 1.0 - std::pow(homologous, p.m_exp);
  const double sigma = hardening * rate * softening;
  if (sigma < 0.0) {
    log::warn("jc_flow_stress: negative flow stress " + std::to_string(sigma) +
              " MPa (strain rate far below reference)");
  }
  return sigma;
}

SyntheticDeflection::SyntheticDeflection(DeflectionModelConfig config)
    : config_(std::move(config)), kappa_(0.0) {
  if (!(config_.exponent > 0.0) || !(config_.anchor_deflection > 0.0)) {
    throw InvalidArgument("SyntheticDeflection: exponent and anchor must be positive");
  }
  const Point centre(5, 0.5);
  const double sigma = flow_stress(centre);
  kappa_ = config_.anchor_deflection * std::pow(sigma, config_.exponent);
}

double SyntheticDeflection::flow_stress(PointView x) const {
  return jc_flow_stress(denormalize(x, config_.bounds), config_.fixed,
                        config_.plastic_strain, config_.strain_rate,
                        config_.temperature);
}

double SyntheticDeflection::evaluate(PointView x) const {
  const double sigma = flow_stress(x);
  const double y = kappa_ / std::pow(sigma, config_.exponent);
  if (!std::isfinite(y) || !(sigma > 0.0)) {
    throw NumericError("synthetic_deflection: non-finite response (flow stress " +
                       std::to_string(sigma) + ")");
  }
  return y;
}

ThresholdIndicator::ThresholdIndicator(std::shared_ptr<const ResponseModel> response,
                                       double threshold)
    : response_(std::move(response)), threshold_(threshold) {
  if (!response_) throw InvalidArgument("ThresholdIndicator: null response");
  if (!std::isfinite(threshold_)) {
    throw InvalidArgument("ThresholdIndicator: threshold must be finite");
  }
}

bool ThresholdIndicator::operator()(PointView x) const {
  return dirac_membership(response_->evaluate(x), threshold_);
}

ResponseTable evaluate_table(const ResponseModel& response, const Matrix& inputs) {
  if (inputs.cols() != response.dimension()) {
    throw InvalidArgument("evaluate_table: input dimension mismatch");
  }
  ResponseTable table{inputs, {}};
  table.outputs.reserve(inputs.rows());
  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    table.outputs.push_back(response.evaluate(inputs.row(r)));
  }
  return table;
}

ResponseTable read_response_table(const std::filesystem::path& path) {
  const auto raw = csv::read_numeric_file(path);
  if (raw.header.size() < 2 || raw.header.back() != "y") {
    throw CorruptFile(path.string() + ": expected header x1,...,xm,y");
  }
  const std::size_t m = raw.header.size() - 1;
  ResponseTable table{Matrix(0, m), {}};
  for (const auto& row : raw.rows) {
    table.inputs.append_row(std::span<const double>(row.data(), m));
    table.outputs.push_back(row.back());
  }
  if (table.outputs.empty()) throw CorruptFile(path.string() + ": no data rows");
  return table;
}

void write_response_table(const std::filesystem::path& path, const ResponseTable& table) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  std::vector<std::string> header;
  for (std::size_t d = 0; d < table.inputs.cols(); ++d) {
    header.push_back("x" + std::to_string(d + 1));
  }
  header.emplace_back("y");
  csv::write_row(out, header);
  for (std::size_t r = 0; r < table.inputs.rows(); ++r) {
    std::vector<std::string> cells;
    for (double v : table.inputs.row(r)) cells.push_back(csv::format(v));
    cells.push_back(csv::format(table.outputs[r]));
    csv::write_row(out, cells);
  }
}

}  // namespace ouq
