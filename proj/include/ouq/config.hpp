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
#include <string>
#include <vector>

#include "json.hpp"
#include "ouq/baselines.hpp"
#include "ouq/certify.hpp"
#include "ouq/constraints.hpp"
#include "ouq/distributions.hpp"
#include "ouq/response.hpp"
#include "ouq/solver.hpp"
#include "ouq/surrogate.hpp"

namespace ouq {

enum class ResponseKind { Synthetic, External };

struct ResponseSpec {
  ResponseKind kind = ResponseKind::Synthetic;
  DeflectionModelConfig synthetic;
  std::filesystem::path table;  // external: CSV with x1..xm,y
};

struct BaselineSpec {
  bool enabled = true;
  std::size_t mc_samples = 12'000;
  OscillationSearch oscillation;
};

struct SweepStage {
  bool enabled = false;
  double threshold = 1.0;  // must appear in the threshold grid
  SweepSpec spec;
};

// Everything a pipeline run needs. Built from a JSON document; every key
// has a default, so "{}" is a valid config for the synthetic problem.
struct RunConfig {
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  std::filesystem::path output_dir = "ouq-out";
  std::size_t dimension = 5;

  ResponseSpec response;
  LhsConfig data{2000, 1, 0};
  std::vector<double> thresholds{1.03};
  std::vector<UnivariateLaw> truth{std::vector<UnivariateLaw>(5, UnivariateLaw::uniform())};
  CaseSpec constraints;
  TrainConfig surrogate;
  SolverConfig solver;
  double penalty = 1e3;
  BaselineSpec baseline;
  SweepStage sweep;

  nlohmann::json document;  // after overrides; hashed into the manifest

  // Seeds of the individual stages, all derived from `seed`.
  std::uint64_t data_seed() const { return seed; }
  std::uint64_t train_seed() const { return seed + 1; }
  std::uint64_t solver_seed() const { return seed + 2; }
  std::uint64_t baseline_seed() const { return seed + 3; }

  ProductDistribution truth_distribution() const { return ProductDistribution(truth); }
  void validate() const;
};

// Parses and validates. Unknown keys are rejected so typos do not pass
// silently. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& document,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Applies "a.b.c=value" to a document; the value is parsed as JSON when it
// parses, taken as a string otherwise.
void apply_override(nlohmann::json& document, const std::string& assignment);

// 64-bit FNV-1a of the canonical (key-sorted, compact) serialization.
std::uint64_t config_hash(const nlohmann::json& document);
std::string hex64(std::uint64_t value);

}  // namespace ouq
