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

#include "ouq/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <map>

#include "ouq/csv.hpp"
#include "ouq/error.hpp"
#include "ouq/kernels.hpp"
#include "ouq/log.hpp"

namespace ouq {

using nlohmann::json;

namespace artifact {
std::string model(std::size_t k) { return "model_" + std::to_string(k + 1) + ".txt"; }
std::string training(std::size_t k) { return "training_" + std::to_string(k + 1) + ".csv"; }
std::string measure(std::size_t k, Direction direction) {
  return "measure_" + std::to_string(k + 1) + "_" + to_string(direction) + ".csv";
}
}  // namespace artifact

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// Keeps the optimizer from discarding a timed loop.
volatile double g_sink = 0.0;

struct StoredBound {
  double bound = 0.0;
  double exact = 0.0;
};

// (threshold, direction) -> bound, from bounds.csv.
std::map<std::pair<double, Direction>, StoredBound> ReadBounds(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("missing " + path.string() + " (run the bound stage first)");
  std::string line;
  std::getline(in, line);
  std::map<std::pair<double, Direction>, StoredBound> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != 6) {
      throw CorruptFile(path.string() + ":" + std::to_string(line_no) + ": expected 6 cells");
    }
    try {
      out[{std::stod(cells[0]), parse_direction(cells[1])}] = {std::stod(cells[2]),
                                                               std::stod(cells[3])};
    } catch (const std::logic_error&) {
      throw CorruptFile(path.string() + ":" + std::to_string(line_no) + ": bad cell");
    }
  }
  return out;
}

}  // namespace

SpeedReport measure_speed(const RunConfig& config, const MlpModel& model) {
  SpeedReport report;
  const std::size_t m = model.dimension();
  Point x(m, 0.5);
  constexpr int kQueries = 2000;
  auto start = Clock::now();
  double sum = 0.0;
  for (int i = 0; i < kQueries; ++i) {
    x[0] = static_cast<double>(i) / kQueries;
    sum += model.forward(x);
  }
  report.surrogate_seconds = Seconds(start) / kQueries;

  // The exact alternative: a fresh design through the response, labeled,
  // plus the admissible-set residuals of the design's empirical measure.
  const SyntheticDeflection response(config.response.synthetic);
  const auto set = build_case_constraints(config.constraints, config.truth_distribution());
  constexpr int kBatches = 3;
  start = Clock::now();
  for (int b = 0; b < kBatches; ++b) {
    LhsConfig lhs = config.data;
    lhs.seed += static_cast<std::uint64_t>(b);
    const Matrix design = lhs_sample(BoxDomain::unit(m), lhs);
    const ResponseTable table = evaluate_table(response, design);
    const auto labels = LabeledDataset::from_table(table, config.thresholds.front());
    std::vector<double> weights(design.rows(), 1.0 / static_cast<double>(design.rows()));
    const WeightedPoints empirical{m, design.data(), weights};
    sum += max_abs_residual(set, empirical) + labels.labels.front();
  }
  report.exact_seconds = Seconds(start) / kBatches;
  g_sink = sum;
  return report;
}

Pipeline::Pipeline(RunConfig config) : config_(std::move(config)) {
  std::filesystem::create_directories(config_.output_dir);
  const std::string hash = hex64(config_hash(config_.document));
  std::ifstream in(path(artifact::kManifest));
  if (in) {
    json previous = json::parse(in, nullptr, false);
    if (!previous.is_discarded() && previous.value("config_hash", "") == hash) {
      manifest_ = std::move(previous);
    }
  }
  if (!manifest_.is_object()) manifest_ = json::object();
  manifest_["version"] = kVersion;
  manifest_["config_hash"] = hash;
  manifest_["config"] = config_.document;
  manifest_["isa"] = std::string(kernels::isa_name(kernels::active_isa()));
  manifest_["threads"] = config_.threads;
  manifest_["seeds"] = {{"master", config_.seed},
                        {"data", config_.data_seed()},
                        {"train", config_.train_seed()},
                        {"solver", config_.solver_seed()},
                        {"baseline", config_.baseline_seed()}};
}

template <typename Fn>
void Pipeline::Stage(const std::string& name, Fn&& body) {
  log::info("stage " + name);
  const auto start = Clock::now();
  json& entry = manifest_["stages"][name];
  try {
    body();
  } catch (const std::exception& e) {
    entry = {{"status", "failed"}, {"error", e.what()}, {"seconds", Seconds(start)}};
    WriteManifest();
    if (dynamic_cast<const StageError*>(&e)) throw;
    throw StageError(name, e.what());
  }
  entry = {{"status", "ok"}, {"seconds", Seconds(start)}};
  WriteManifest();
}

void Pipeline::WriteManifest() {
  auto out = OpenForWrite(path(artifact::kManifest));
  out << manifest_.dump(2) << '\n';
}

void Pipeline::Record(const std::string& name, const std::string& file) {
  manifest_["artifacts"][name] = path(file).string();
}

ResponseTable Pipeline::LoadDataset() const {
  const auto file = path(artifact::kDataset);
  if (!std::filesystem::exists(file)) {
    throw Error("missing " + file.string() + " (run gen-data first)");
  }
  return read_response_table(file);
}

MlpModel Pipeline::LoadModel(std::size_t k) const {
  const auto file = path(artifact::model(k));
  if (!std::filesystem::exists(file)) {
    throw Error("missing " + file.string() + " (run train first)");
  }
  MlpModel model = load_model(file);
  if (model.dimension() != config_.dimension) {
    throw InvalidArgument(file.string() + ": model input dimension does not match config");
  }
  return model;
}

std::shared_ptr<const ResponseModel> Pipeline::ExactResponse() const {
  if (config_.response.kind != ResponseKind::Synthetic) return nullptr;
  return std::make_shared<SyntheticDeflection>(config_.response.synthetic);
}

std::optional<IndicatorFn> Pipeline::ExactIndicator(double threshold) const {
  auto response = ExactResponse();
  if (!response) return std::nullopt;
  return IndicatorFn(ThresholdIndicator(response, threshold));
}

void Pipeline::check_inputs() {
  Stage("config", [&] { config_.validate(); });
}

void Pipeline::gen_data() {
  Stage("gen-data", [&] {
    ResponseTable table;
    if (config_.response.kind == ResponseKind::Synthetic) {
      const Matrix design = lhs_sample(BoxDomain::unit(config_.dimension), config_.data);
      table = evaluate_table(SyntheticDeflection(config_.response.synthetic), design);
      manifest_["dataset"]["source"] = "synthetic";
    } else {
      table = read_response_table(config_.response.table);
      if (table.inputs.cols() != config_.dimension) {
        throw InvalidArgument(config_.response.table.string() + ": expected " +
                              std::to_string(config_.dimension) + " input columns");
      }
      manifest_["dataset"]["source"] = config_.response.table.string();
    }
    write_response_table(path(artifact::kDataset), table);
    manifest_["dataset"]["samples"] = table.outputs.size();
    Record("dataset", artifact::kDataset);
  });
}

void Pipeline::train() {
  Stage("train", [&] {
    const ResponseTable table = LoadDataset();
    manifest_["dataset"]["train"] = config_.surrogate.train_size;
    manifest_["dataset"]["test"] = config_.surrogate.test_size;
    json models = json::array();
    for (std::size_t k = 0; k < config_.thresholds.size(); ++k) {
      const double threshold = config_.thresholds[k];
      const auto start = Clock::now();
      const auto data = LabeledDataset::from_table(table, threshold);
      const TrainResult result = ouq::train(data, config_.surrogate);
      const double seconds = Seconds(start);
      save_model(path(artifact::model(k)), result.model);
      {
        auto out = OpenForWrite(path(artifact::training(k)));
        csv::write_row(out, {"epoch", "train_bce", "test_bce"});
        for (std::size_t e = 0; e < result.trace.train_loss.size(); ++e) {
          csv::write_row(out, {std::to_string(e + 1), csv::format(result.trace.train_loss[e]),
                               csv::format(result.trace.test_loss[e])});
        }
      }
      models.push_back({{"threshold", threshold},
                        {"model", path(artifact::model(k)).string()},
                        {"trace", path(artifact::training(k)).string()},
                        {"train_accuracy", result.trace.train_accuracy},
                        {"test_accuracy", result.trace.test_accuracy},
                        {"test_bce", result.trace.test_loss.empty()
                                         ? json(nullptr)
                                         : json(result.trace.test_loss.back())},
                        {"seconds", seconds}});
      if (k == 0 && config_.response.kind == ResponseKind::Synthetic) {
        const SpeedReport speed = measure_speed(config_, result.model);
        manifest_["speed"] = {{"surrogate_eval_seconds", speed.surrogate_seconds},
                              {"exact_batch_seconds", speed.exact_seconds},
                              {"ratio", speed.ratio()}};
      }
    }
    manifest_["models"] = std::move(models);
  });
}

void Pipeline::bound() {
  Stage("bound", [&] {
    const AdmissibleSet set =
        build_case_constraints(config_.constraints, config_.truth_distribution());
    std::vector<BoundRow> rows;
    auto restarts = OpenForWrite(path(artifact::kRestarts));
    csv::write_row(restarts, {"threshold", "direction", "restart", "seed", "smoothed", "exact",
                              "max_residual", "final_loss", "iterations", "feasible",
                              "failed"});
    for (std::size_t k = 0; k < config_.thresholds.size(); ++k) {
      const double threshold = config_.thresholds[k];
      OuqProblem problem;
      problem.set = set;
      problem.surrogate = std::make_shared<MlpModel>(LoadModel(k));
      problem.exact_indicator = ExactIndicator(threshold);
      problem.penalties = PenaltyWeights::uniform(set.num_constraints(), config_.penalty);
      problem.config = config_.solver;
      for (Direction direction : {Direction::Upper, Direction::Lower}) {
        problem.direction = direction;
        BoundResult result = solve(problem);
        if (!result.feasible) {
          log::warn("threshold " + csv::format(threshold) + " " + to_string(direction) +
                    ": no restart met the feasibility tolerance");
        }
        for (const auto& r : result.restarts) {
          csv::write_row(restarts,
                         {csv::format(threshold), to_string(direction), std::to_string(r.index),
                          std::to_string(r.seed), csv::format(r.smoothed), csv::format(r.exact),
                          csv::format(r.max_residual), csv::format(r.final_loss),
                          std::to_string(r.iterations), r.feasible ? "1" : "0",
                          r.failed ? "1" : "0"});
        }
        if (result.measure) {
          auto out = OpenForWrite(path(artifact::measure(k, direction)));
          write_measure_csv(out, *result.measure);
        }
        rows.push_back({threshold, std::move(result)});
      }
    }
    write_bounds_csv(path(artifact::kBounds), rows);
    Record("bounds", artifact::kBounds);
    Record("restarts", artifact::kRestarts);
    manifest_["constraints"] = set.num_constraints();
  });
}

void Pipeline::baseline() {
  Stage("baseline", [&] {
    auto response = ExactResponse();
    if (!response) {
      log::warn("baseline: needs the synthetic response; skipped for external data");
      manifest_["baseline"] = "skipped";
      return;
    }
    const auto bounds = ReadBounds(path(artifact::kBounds));
    const ProductDistribution truth = config_.truth_distribution();
    const std::size_t n = config_.baseline.mc_samples;
    const double mean = monte_carlo_mean(truth, *response, n, config_.baseline_seed());
    const auto oscillations = estimate_oscillations(*response, BoxDomain::unit(config_.dimension),
                                                    config_.baseline.oscillation);
    std::vector<ComparisonRow> rows;
    for (double threshold : config_.thresholds) {
      ComparisonRow row;
      row.threshold = threshold;
      row.mc = monte_carlo_pof(truth, ThresholdIndicator(response, threshold), n,
                               config_.baseline_seed());
      row.com = mcdiarmid_bound(oscillations, mean, threshold).bound;
      const auto up = bounds.find({threshold, Direction::Upper});
      const auto lo = bounds.find({threshold, Direction::Lower});
      if (up == bounds.end() || lo == bounds.end()) {
        throw Error("bounds.csv has no rows for threshold " + csv::format(threshold));
      }
      row.upper = up->second.exact;
      row.lower = lo->second.exact;
      rows.push_back(row);
    }
    write_comparison_csv(path(artifact::kComparison), rows);
    Record("comparison", artifact::kComparison);
  });
}

void Pipeline::sweep() {
  Stage("sweep", [&] {
    std::size_t k = config_.thresholds.size();
    for (std::size_t i = 0; i < config_.thresholds.size(); ++i) {
      if (config_.thresholds[i] == config_.sweep.threshold) k = i;
    }
    if (k == config_.thresholds.size()) {
      throw InvalidArgument("sweep threshold is not in the threshold grid");
    }
    SweepContext context;
    context.surrogate = std::make_shared<MlpModel>(LoadModel(k));
    context.exact_indicator = ExactIndicator(config_.sweep.threshold);
    context.penalty = config_.penalty;
    context.solver = config_.solver;
    const SweepResult result = design_sweep(config_.sweep.spec, context);
    write_sweep_csv(path(artifact::kSweep), result);
    write_regions_csv(path(artifact::kRegions), result);
    Record("sweep", artifact::kSweep);
    Record("regions", artifact::kRegions);
    std::size_t failed = 0;
    for (const auto& p : result.points) failed += p.failed ? 1 : 0;
    manifest_["sweep"] = {{"threshold", config_.sweep.threshold},
                          {"points", result.points.size()},
                          {"failed_points", failed}};
  });
}

void Pipeline::run() {
  check_inputs();
  gen_data();
  train();
  bound();
  if (config_.baseline.enabled) baseline();
  if (config_.sweep.enabled) sweep();
}

}  // namespace ouq
