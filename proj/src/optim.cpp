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

#include "ouq/optim.hpp"

#include <cmath>
#include <string>

#include "ouq/error.hpp"

namespace ouq {

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("AdamConfig: lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvalidArgument("AdamConfig: decay rates must lie in [0,1)");
  }
  if (!(epsilon > 0.0)) throw InvalidArgument("AdamConfig: epsilon must be > 0");
}

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> gradient, const AdamConfig& config) {
  if (params.size() != gradient.size() ||
      state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw InvalidArgument("adam_step: shape mismatch");
  }
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    if (!std::isfinite(gradient[i])) {
      throw NumericError("adam_step: non-finite gradient at index " +
                         std::to_string(i) + " (step " +
                         std::to_string(state.step + 1) + ")");
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = gradient[i];
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

MinimizeResult adam_minimize(const ValueAndGradient& fn, std::vector<double> x0,
                             const AdamConfig& config) {
  config.validate();
  MinimizeResult result;
  result.params = std::move(x0);
  AdamState state(result.params.size());
  std::vector<double> grad(result.params.size());
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    result.value = fn(result.params, grad);
    double norm2 = 0.0;
    for (double g : grad) norm2 += g * g;
    if (std::sqrt(norm2) < config.gradient_tolerance) {
      result.converged = true;
      result.iterations = it;
      return result;
    }
    adam_step(state, result.params, grad, config);
  }
  result.iterations = config.max_iterations;
  result.value = fn(result.params, grad);
  return result;
}

std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite_difference_gradient: h must be > 0");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    probe[d] = x[d] + h;
    const double plus = f(probe);
    probe[d] = x[d] - h;
    const double minus = f(probe);
    probe[d] = x[d];
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NumericError("finite_difference_gradient: non-finite value around coordinate " +
                         std::to_string(d));
    }
    grad[d] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

}  // namespace ouq
