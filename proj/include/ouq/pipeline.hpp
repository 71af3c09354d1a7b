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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ouq/config.hpp"

namespace ouq {

inline constexpr const char* kVersion = "1.0.0";

// Artifact names inside the output directory.
namespace artifact {
inline constexpr const char* kDataset = "dataset.csv";
inline constexpr const char* kBounds = "bounds.csv";
inline constexpr const char* kRestarts = "restarts.csv";
inline constexpr const char* kComparison = "comparison.csv";
inline constexpr const char* kSweep = "sweep.csv";
inline constexpr const char* kRegions = "regions.csv";
inline constexpr const char* kManifest = "manifest.json";
std::string model(std::size_t threshold_index);     // model_<index + 1>.txt
std::string training(std::size_t threshold_index);  // training_<k>.csv
std::string measure(std::size_t threshold_index, Direction direction);
}  // namespace artifact

// Surrogate cost against the exact alternative it replaces: regenerating
// the labeled training set (LHS design + response + labels + constraint
// residuals of the design) for every query.
struct SpeedReport {
  double surrogate_seconds = 0.0;  // one forward evaluation
  double exact_seconds = 0.0;      // one regeneration batch
  double ratio() const { return exact_seconds / surrogate_seconds; }
};

SpeedReport measure_speed(const RunConfig& config, const MlpModel& model);

// Stages share state through files in the output directory, so each one
// can run on its own (CLI subcommands) or in sequence (run). Every stage
// updates manifest.json; failures surface as StageError and leave the
// artifacts written so far in place.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  void check_inputs();  // stage "config"
  void gen_data();
  void train();
  void bound();
  void baseline();
  void sweep();
  void run();  // all of the above, baseline and sweep per config

  const RunConfig& config() const { return config_; }
  const nlohmann::json& manifest() const { return manifest_; }
  std::filesystem::path path(const std::string& name) const { return config_.output_dir / name; }

 private:
  template <typename Fn>
  void Stage(const std::string& name, Fn&& body);
  void WriteManifest();
  void Record(const std::string& name, const std::string& file);
  ResponseTable LoadDataset() const;
  MlpModel LoadModel(std::size_t threshold_index) const;
  std::optional<IndicatorFn> ExactIndicator(double threshold) const;
  std::shared_ptr<const ResponseModel> ExactResponse() const;

  RunConfig config_;
  nlohmann::json manifest_;
};

}  // namespace ouq
