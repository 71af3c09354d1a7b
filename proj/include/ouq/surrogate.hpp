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
#include <iosfwd>
#include <span>
#include <vector>

#include "ouq/matrix.hpp"
#include "ouq/measures.hpp"
#include "ouq/optim.hpp"
#include "ouq/response.hpp"

namespace ouq {

inline constexpr double kSeluLambda = 1.0507009873554804934193349852946;
inline constexpr double kSeluAlpha = 1.6732632423543772848170429916717;

double selu(double z);
double selu_derivative(double z);
double sigmoid(double z);

// Smooth score in [0,1] with an input gradient; the OUQ solver only needs
// this much of a surrogate.
class DifferentiableScore {
 public:
  virtual ~DifferentiableScore() = default;
  virtual std::size_t dimension() const = 0;
  virtual double value(PointView x) const = 0;
  // Returns value(x) and writes d value / dx into `gradient`.
  virtual double value_and_gradient(PointView x, std::span<double> gradient) const = 0;
};

// Fully connected classifier: affine + SELU on every hidden layer, affine +
// logistic sigmoid on the scalar output. Parameters live in one flat array,
// per layer the row-major weight matrix (out x in) followed by the bias.
class MlpModel final : public DifferentiableScore {
 public:
  // layer_sizes = {m, hidden..., 1}; all parameters zero.
  explicit MlpModel(std::vector<std::size_t> layer_sizes);

  // Self-normalizing initialization: N(0, 1/fan_in) weights, zero biases.
  static MlpModel initialized(std::vector<std::size_t> layer_sizes, std::uint64_t seed);

  std::size_t dimension() const override { return sizes_.front(); }
  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t num_layers() const { return sizes_.size() - 1; }

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  // Output probability, strictly inside (0,1). Throws NumericError on a
  // non-finite intermediate value.
  double forward(PointView x) const;
  double logit(PointView x) const;

  double value(PointView x) const override { return forward(x); }
  double value_and_gradient(PointView x, std::span<double> gradient) const override;

  // Adds d BCE(forward(x), label) / d params into `gradient` (length
  // parameters().size()) and returns the clamped BCE of this sample.
  double accumulate_parameter_gradient(PointView x, double label,
                                       std::span<double> gradient) const;

  bool operator==(const MlpModel& other) const {
    return sizes_ == other.sizes_ && params_ == other.params_;
  }

 private:
  struct Workspace;
  Workspace& local_workspace() const;
  double run_forward(PointView x, Workspace& ws) const;

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;  // start of each layer's weights
  std::vector<double> params_;
};

inline std::vector<double> input_gradient(const MlpModel& model, PointView x) {
  std::vector<double> g(model.dimension());
  model.value_and_gradient(x, g);
  return g;
}

inline constexpr double kBceClamp = 1e-7;

// -(1/N) sum [y log p + (1-y) log(1-p)], p clamped to [1e-7, 1-1e-7].
double bce_loss(std::span<const double> predictions, std::span<const double> labels);

struct LabeledDataset {
  Matrix inputs;
  std::vector<double> labels;  // 0 or 1

  std::size_t size() const { return labels.size(); }
  void validate() const;
  // Labels y >= threshold, so one response table serves many thresholds.
  static LabeledDataset from_table(const ResponseTable& table, double threshold);
};

struct TrainConfig {
  std::vector<std::size_t> hidden{200, 200, 200, 200};
  std::size_t train_size = 1500;
  std::size_t test_size = 500;
  std::size_t batch_size = 100;
  std::size_t epochs = 200;
  AdamConfig adam{3e-4, 0.9, 0.999, 1e-8, 0, 0.0};
  std::uint64_t seed = 0;
  bool shuffle = true;
  // Stop early once the training BCE drops below this value (0 disables).
  double target_train_loss = 0.0;

  void validate(std::size_t dataset_size) const;
};

struct TrainTrace {
  std::vector<double> train_loss;
  std::vector<double> test_loss;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct TrainResult {
  MlpModel model;
  TrainTrace trace;
};

// Mini-batch ADAM on BCE. Rows [0, train_size) train, the next test_size
// rows test. Deterministic for a given seed and kernel ISA.
TrainResult train(const LabeledDataset& data, const TrainConfig& config);

std::vector<double> predict(const MlpModel& model, const Matrix& inputs);
// Fraction of rows where (p >= 0.5) equals the label.
double accuracy(const MlpModel& model, const Matrix& inputs,
                std::span<const double> labels, std::size_t begin = 0,
                std::size_t end = static_cast<std::size_t>(-1));

inline constexpr int kModelFormatVersion = 1;

void save_model(std::ostream& out, const MlpModel& model);
MlpModel load_model(std::istream& in);
void save_model(const std::filesystem::path& path, const MlpModel& model);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace ouq
