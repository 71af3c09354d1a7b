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

// Shared fixtures: analytic scores that stand in for trained classifiers
// where a test needs a known decision boundary.

#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>

#include "ouq/surrogate.hpp"

namespace ouq::testing {

// sigmoid(slope * (a . x - offset)): a smooth classifier of the half-space
// a . x >= offset.
class HalfSpaceScore final : public DifferentiableScore {
 public:
  HalfSpaceScore(std::vector<double> normal, double offset, double slope = 2000.0)
      : normal_(std::move(normal)), offset_(offset), slope_(slope) {}

  std::size_t dimension() const override { return normal_.size(); }
  double value(PointView x) const override { return sigmoid(slope_ * Margin(x)); }
  double value_and_gradient(PointView x, std::span<double> g) const override {
    const double s = value(x);
    for (std::size_t d = 0; d < normal_.size(); ++d) g[d] = slope_ * s * (1.0 - s) * normal_[d];
    return s;
  }
  bool unsafe(PointView x) const { return Margin(x) >= 0.0; }

 private:
  double Margin(PointView x) const {
    double z = -offset_;
    for (std::size_t d = 0; d < normal_.size(); ++d) z += normal_[d] * x[d];
    return z;
  }

  std::vector<double> normal_;
  double offset_;
  double slope_;
};

inline double RelErr(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Fresh scratch directory under OUQ_TEST_TMP (or the system temp dir).
inline std::filesystem::path ScratchDir(const std::string& name) {
  const char* root = std::getenv("OUQ_TEST_TMP");
  auto dir = (root ? std::filesystem::path(root) : std::filesystem::temp_directory_path() /
                                                       "ouq-tests") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ouq::testing
