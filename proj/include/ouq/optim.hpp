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
#include <span>
#include <vector>

namespace ouq {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_iterations = 1000;
  double gradient_tolerance = 1e-6;

  void validate() const;
};

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::size_t step = 0;

  explicit AdamState(std::size_t size = 0)
      : first_moment(size, 0.0), second_moment(size, 0.0) {}
};

// One bias-corrected ADAM update of `params` in place. Throws NumericError
// (leaving params and state untouched) if the gradient is not finite.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> gradient, const AdamConfig& config);

// Returns the objective value and writes the gradient into the second
// argument.
using ValueAndGradient = std::function<double(std::span<const double>, std::span<double>)>;

struct MinimizeResult {
  std::vector<double> params;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;  // gradient norm fell below tolerance
};

// Runs adam_step until max_iterations or ||grad|| < gradient_tolerance.
MinimizeResult adam_minimize(const ValueAndGradient& fn, std::vector<double> x0,
                             const AdamConfig& config);

// Central differences (f(x + h e_d) - f(x - h e_d)) / 2h.
std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x, double h = 1e-5);

}  // namespace ouq
