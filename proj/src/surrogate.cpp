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

#include "ouq/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "ouq/error.hpp"
#include "ouq/kernels.hpp"
#include "ouq/log.hpp"

namespace ouq {

double selu(double z) {
  return z > 0.0 ? kSeluLambda * z : kSeluLambda * kSeluAlpha * std::expm1(z);
}

double selu_derivative(double z) {
  return z > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(z);
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// Keeps forward() strictly inside (0,1) even when the logit saturates.
double OpenUnit(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

void RequireFinite(std::span<const double> values, std::size_t layer) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericError("mlp: non-finite activation in layer " + std::to_string(layer));
    }
  }
}

}  // namespace

struct MlpModel::Workspace {
  // pre[l], post[l] for hidden layers l = 0..L-2; post[-1] is the input.
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
  std::vector<double> grad_a;
  std::vector<double> grad_b;

  explicit Workspace(const std::vector<std::size_t>& sizes) {
    const std::size_t hidden = sizes.size() - 2;
    pre.resize(hidden);
    post.resize(hidden);
    std::size_t widest = sizes.front();
    for (std::size_t l = 0; l < hidden; ++l) {
      pre[l].resize(sizes[l + 1]);
      post[l].resize(sizes[l + 1]);
      widest = std::max(widest, sizes[l + 1]);
    }
    grad_a.resize(widest);
    grad_b.resize(widest);
  }
};

MlpModel::MlpModel(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2 || sizes_.back() != 1) {
    throw InvalidArgument("MlpModel: layer sizes must be {m, hidden..., 1}");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0) throw InvalidArgument("MlpModel: zero-width layer");
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

MlpModel MlpModel::initialized(std::vector<std::size_t> layer_sizes, std::uint64_t seed) {
  MlpModel model(std::move(layer_sizes));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    const double stddev = 1.0 / std::sqrt(static_cast<double>(model.sizes_[l]));
    std::normal_distribution<double> normal(0.0, stddev);
    for (double& w : model.weights(l)) w = normal(rng);
  }
  return model;
}

std::span<double> MlpModel::weights(std::size_t layer) {
  return {params_.data() + offsets_.at(layer), sizes_[layer] * sizes_[layer + 1]};
}
std::span<const double> MlpModel::weights(std::size_t layer) const {
  return {params_.data() + offsets_.at(layer), sizes_[layer] * sizes_[layer + 1]};
}
std::span<double> MlpModel::bias(std::size_t layer) {
  return {params_.data() + offsets_.at(layer) + sizes_[layer] * sizes_[layer + 1],
          sizes_[layer + 1]};
}
std::span<const double> MlpModel::bias(std::size_t layer) const {
  return {params_.data() + offsets_.at(layer) + sizes_[layer] * sizes_[layer + 1],
          sizes_[layer + 1]};
}

double MlpModel::run_forward(PointView x, Workspace& ws) const {
  if (x.size() != dimension()) {
    throw InvalidArgument("mlp: input dimension " + std::to_string(x.size()) +
                          " != model dimension " + std::to_string(dimension()));
  }
  PointView input = x;
  const std::size_t hidden = num_layers() - 1;
  for (std::size_t l = 0; l < hidden; ++l) {
    kernels::affine(weights(l), bias(l), input, ws.pre[l]);
    for (std::size_t k = 0; k < ws.pre[l].size(); ++k) ws.post[l][k] = selu(ws.pre[l][k]);
    RequireFinite(ws.post[l], l);
    input = ws.post[l];
  }
  const double z = bias(hidden)[0] + kernels::dot(weights(hidden), input);
  if (!std::isfinite(z)) throw NumericError("mlp: non-finite output logit");
  return z;
}

MlpModel::Workspace& MlpModel::local_workspace() const {
  // One scratch area per thread, rebuilt when a differently shaped model
  // is evaluated on the same thread.
  thread_local std::vector<std::size_t> cached_sizes;
  thread_local std::unique_ptr<Workspace> ws;
  if (!ws || cached_sizes != sizes_) {
    ws = std::make_unique<Workspace>(sizes_);
    cached_sizes = sizes_;
  }
  return *ws;
}

double MlpModel::logit(PointView x) const {
  return run_forward(x, local_workspace());
}

double MlpModel::forward(PointView x) const { return OpenUnit(sigmoid(logit(x))); }

double MlpModel::value_and_gradient(PointView x, std::span<double> gradient) const {
  if (gradient.size() != dimension()) {
    throw InvalidArgument("mlp: gradient buffer has wrong size");
  }
  Workspace& ws = local_workspace();
  const double z = run_forward(x, ws);
  const double p = OpenUnit(sigmoid(z));
  const std::size_t out_layer = num_layers() - 1;
  // sigma'(z) from both tails; p * (1 - p) cancels once p rounds to 1.
  const double dz = sigmoid(z) * sigmoid(-z);

  // grad_a holds d p / d (post-activation of the current layer).
  std::span<double> g(ws.grad_a.data(), sizes_[out_layer]);
  std::span<double> next(ws.grad_b.data(), sizes_[out_layer]);
  const auto w_out = weights(out_layer);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = dz * w_out[k];
  for (std::size_t l = out_layer; l-- > 0;) {
    for (std::size_t k = 0; k < g.size(); ++k) g[k] *= selu_derivative(ws.pre[l][k]);
    next = std::span<double>(next.data(), sizes_[l]);
    std::fill(next.begin(), next.end(), 0.0);
    kernels::affine_transpose_acc(weights(l), g, next);
    std::swap(g, next);
  }
  std::copy(g.begin(), g.end(), gradient.begin());
  return p;
}

double MlpModel::accumulate_parameter_gradient(PointView x, double label,
                                               std::span<double> gradient) const {
  if (gradient.size() != params_.size()) {
    throw InvalidArgument("mlp: parameter gradient buffer has wrong size");
  }
  Workspace& ws = local_workspace();
  const double z = run_forward(x, ws);
  const double p = sigmoid(z);
  const double pc = std::clamp(p, kBceClamp, 1.0 - kBceClamp);
  const double loss = -(label * std::log(pc) + (1.0 - label) * std::log(1.0 - pc));

  auto param_weights = [&](std::size_t l) {
    return gradient.subspan(offsets_[l], sizes_[l] * sizes_[l + 1]);
  };
  auto param_bias = [&](std::size_t l) {
    return gradient.subspan(offsets_[l] + sizes_[l] * sizes_[l + 1], sizes_[l + 1]);
  };

  const std::size_t out_layer = num_layers() - 1;
  const double delta = p - label;
  PointView last_input = out_layer == 0 ? x : PointView(ws.post[out_layer - 1]);
  param_bias(out_layer)[0] += delta;
  kernels::axpy(delta, last_input, param_weights(out_layer));

  std::span<double> g(ws.grad_a.data(), sizes_[out_layer]);
  std::span<double> next(ws.grad_b.data(), sizes_[out_layer]);
  const auto w_out = weights(out_layer);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = delta * w_out[k];
  for (std::size_t l = out_layer; l-- > 0;) {
    for (std::size_t k = 0; k < g.size(); ++k) g[k] *= selu_derivative(ws.pre[l][k]);
    PointView layer_input = l == 0 ? x : PointView(ws.post[l - 1]);
    kernels::axpy(1.0, g, param_bias(l));
    kernels::rank1_update(1.0, g, layer_input, param_weights(l));
    if (l == 0) break;
    next = std::span<double>(next.data(), sizes_[l]);
    std::fill(next.begin(), next.end(), 0.0);
    kernels::affine_transpose_acc(weights(l), g, next);
    std::swap(g, next);
  }
  return loss;
}

double bce_loss(std::span<const double> predictions, std::span<const double> labels) {
  if (predictions.size() != labels.size()) {
    throw InvalidArgument("bce_loss: length mismatch");
  }
  if (predictions.empty()) throw InvalidArgument("bce_loss: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double p = std::clamp(predictions[i], kBceClamp, 1.0 - kBceClamp);
    const double y = labels[i];
    sum += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return -sum / static_cast<double>(predictions.size());
}

void LabeledDataset::validate() const {
  if (labels.empty()) throw InvalidArgument("LabeledDataset: no rows");
  if (inputs.rows() != labels.size()) {
    throw InvalidArgument("LabeledDataset: row count mismatch");
  }
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw InvalidArgument("LabeledDataset: labels must be 0/1");
  }
}

LabeledDataset LabeledDataset::from_table(const ResponseTable& table, double threshold) {
  LabeledDataset data{table.inputs, {}};
  data.labels.reserve(table.outputs.size());
  for (double y : table.outputs) data.labels.push_back(dirac_membership(y, threshold) ? 1.0 : 0.0);
  return data;
}

void TrainConfig::validate(std::size_t dataset_size) const {
  if (train_size == 0) throw InvalidArgument("TrainConfig: empty training split");
  if (train_size + test_size > dataset_size) {
    throw InvalidArgument("TrainConfig: split sizes exceed dataset size " +
                          std::to_string(dataset_size));
  }
  if (batch_size == 0) throw InvalidArgument("TrainConfig: batch size must be >= 1");
  adam.validate();
}

std::vector<double> predict(const MlpModel& model, const Matrix& inputs) {
  std::vector<double> out(inputs.rows());
  for (std::size_t r = 0; r < inputs.rows(); ++r) out[r] = model.forward(inputs.row(r));
  return out;
}

double accuracy(const MlpModel& model, const Matrix& inputs,
                std::span<const double> labels, std::size_t begin, std::size_t end) {
  end = std::min(end, inputs.rows());
  if (begin >= end) return 0.0;
  std::size_t hits = 0;
  for (std::size_t r = begin; r < end; ++r) {
    const double cls = model.forward(inputs.row(r)) >= 0.5 ? 1.0 : 0.0;
    if (cls == labels[r]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(end - begin);
}

namespace {

double SplitLoss(const MlpModel& model, const LabeledDataset& data, std::size_t begin,
                 std::size_t end) {
  std::vector<double> p;
  p.reserve(end - begin);
  for (std::size_t r = begin; r < end; ++r) p.push_back(model.forward(data.inputs.row(r)));
  return bce_loss(p, std::span<const double>(data.labels).subspan(begin, end - begin));
}

}  // namespace

TrainResult train(const LabeledDataset& data, const TrainConfig& config) {
  data.validate();
  config.validate(data.size());
  const std::size_t n_train = config.train_size;
  const std::size_t test_begin = n_train;
  const std::size_t test_end = n_train + config.test_size;

  const double positives = std::accumulate(data.labels.begin(),
                                           data.labels.begin() + static_cast<long>(n_train), 0.0);
  if (positives == 0.0 || positives == static_cast<double>(n_train)) {
    log::warn("train: training labels contain a single class");
  }

  std::vector<std::size_t> sizes{data.inputs.cols()};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(1);
  TrainResult result{MlpModel::initialized(sizes, config.seed), {}};
  MlpModel& model = result.model;

  std::mt19937_64 shuffle_rng(config.seed + 0x5eedULL);
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), std::size_t{0});
  AdamState state(model.parameters().size());
  std::vector<double> grad(model.parameters().size());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n_train; start += config.batch_size) {
      const std::size_t stop = std::min(start + config.batch_size, n_train);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t r = order[k];
        epoch_loss += model.accumulate_parameter_gradient(data.inputs.row(r), data.labels[r], grad);
      }
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (double& g : grad) g *= scale;
      try {
        adam_step(state, model.parameters(), grad, config.adam);
      } catch (const NumericError& e) {
        throw NumericError("train: diverged in epoch " + std::to_string(epoch) + ": " + e.what());
      }
    }
    const double train_loss = SplitLoss(model, data, 0, n_train);
    if (!std::isfinite(train_loss) || !std::isfinite(epoch_loss)) {
      throw NumericError("train: loss is not finite in epoch " + std::to_string(epoch));
    }
    result.trace.train_loss.push_back(train_loss);
    if (config.test_size > 0) {
      result.trace.test_loss.push_back(SplitLoss(model, data, test_begin, test_end));
    }
    if (config.target_train_loss > 0.0 && train_loss < config.target_train_loss) break;
  }
  result.trace.train_accuracy = accuracy(model, data.inputs, data.labels, 0, n_train);
  result.trace.test_accuracy =
      config.test_size > 0 ? accuracy(model, data.inputs, data.labels, test_begin, test_end) : 0.0;
  return result;
}

// Text container:
//   ouq-mlp <version>
//   layers <count> <size>...
//   params <count>
//   <one hex-float per line>
//   end
void save_model(std::ostream& out, const MlpModel& model) {
  out << "ouq-mlp " << kModelFormatVersion << '\n';
  out << "layers " << model.layer_sizes().size();
  for (std::size_t s : model.layer_sizes()) out << ' ' << s;
  out << '\n' << "params " << model.parameters().size() << '\n';
  char buf[64];
  for (double v : model.parameters()) {
    std::snprintf(buf, sizeof(buf), "%a", v);
    out << buf << '\n';
  }
  out << "end\n";
}

MlpModel load_model(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "ouq-mlp") {
    throw CorruptFile("model file: missing 'ouq-mlp' header");
  }
  if (version != kModelFormatVersion) {
    throw VersionMismatch("model file: version " + std::to_string(version) +
                          " unsupported (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "layers" || count < 2 || count > 1024) {
    throw CorruptFile("model file: bad 'layers' record");
  }
  std::vector<std::size_t> sizes(count);
  for (auto& s : sizes) {
    if (!(in >> s) || s == 0 || s > (1u << 20)) throw CorruptFile("model file: bad layer size");
  }
  MlpModel model(std::move(sizes));
  std::size_t n_params = 0;
  if (!(in >> tag >> n_params) || tag != "params" || n_params != model.parameters().size()) {
    throw CorruptFile("model file: parameter count does not match layer sizes");
  }
  std::string token;
  for (double& v : model.parameters()) {
    if (!(in >> token)) throw CorruptFile("model file: truncated parameter block");
    char* end = nullptr;
    v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || !std::isfinite(v)) {
      throw CorruptFile("model file: bad parameter '" + token + "'");
    }
  }
  if (!(in >> tag) || tag != "end") throw CorruptFile("model file: missing end marker");
  return model;
}

void save_model(const std::filesystem::path& path, const MlpModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  save_model(out, model);
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return load_model(in);
}

}  // namespace ouq
