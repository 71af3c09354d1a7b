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

#include "ouq/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ouq/error.hpp"

namespace ouq {
namespace {

using nlohmann::json;

// Reads keys of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw InvalidArgument("config: '" + Name() + "' must be an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!node_.contains(key)) return;
    seen_.insert(key);
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw InvalidArgument("config: bad value for '" + Key(key) + "': " + e.what());
    }
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(node_.at(key), Key(key));
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) {
        throw InvalidArgument("config: unknown key '" + Key(item.key()) + "'");
      }
    }
  }

  std::string Key(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string Name() const { return path_.empty() ? "<root>" : path_; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

GaussianComponent ParseComponent(Section s) {
  GaussianComponent c;
  s.get("loc", c.loc);
  s.get("scale", c.scale);
  s.finish();
  return c;
}

UnivariateLaw ParseLaw(const json& node, const std::string& path) {
  std::string kind;
  if (node.is_string()) {
    kind = node.get<std::string>();
  } else {
    Section s(node, path);
    s.get("kind", kind);
    if (kind == "uniform") {
      s.finish();
      return UnivariateLaw::uniform();
    }
    if (kind == "truncated_gaussian") {
      GaussianComponent c;
      s.get("loc", c.loc);
      s.get("scale", c.scale);
      s.finish();
      return UnivariateLaw::truncated_gaussian(c.loc, c.scale);
    }
    if (kind == "bimodal") {
      GaussianComponent first{0.25, 0.1};
      GaussianComponent second{0.75, 0.1};
      double weight = 0.5;
      if (s.has("first")) first = ParseComponent(s.child("first"));
      if (s.has("second")) second = ParseComponent(s.child("second"));
      s.get("first_weight", weight);
      s.finish();
      return UnivariateLaw::bimodal(first, second, weight);
    }
    throw InvalidArgument("config: unknown law kind '" + kind + "' at '" + path + "'");
  }
  if (kind == "uniform") return UnivariateLaw::uniform();
  if (kind == "truncated_gaussian") return UnivariateLaw::truncated_gaussian();
  if (kind == "bimodal") return UnivariateLaw::bimodal();
  throw InvalidArgument("config: unknown law '" + kind + "' at '" + path + "'");
}

std::vector<double> ParseGrid(const json& node, const std::string& path) {
  if (node.is_array()) return node.get<std::vector<double>>();
  Section s(node, path);
  double from = 0.0, to = 1.0;
  std::size_t count = 11;
  s.get("from", from);
  s.get("to", to);
  s.get("count", count);
  s.finish();
  if (count == 0) throw InvalidArgument("config: '" + path + ".count' must be >= 1");
  std::vector<double> grid(count, from);
  for (std::size_t i = 1; i < count; ++i) {
    grid[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

// 1-based indices in the file, 0-based in memory.
std::size_t ZeroBased(std::size_t one_based, const std::string& key) {
  if (one_based == 0) throw InvalidArgument("config: '" + key + "' is 1-based");
  return one_based - 1;
}

}  // namespace

void RunConfig::validate() const {
  if (dimension == 0) throw InvalidArgument("config: dimension must be >= 1");
  if (response.kind == ResponseKind::Synthetic && dimension != 5) {
    throw InvalidArgument("config: the synthetic response has 5 inputs");
  }
  if (response.kind == ResponseKind::External &&
      !std::filesystem::exists(response.table)) {
    throw InvalidArgument("config: response table not found: " + response.table.string());
  }
  if (thresholds.empty()) throw InvalidArgument("config: empty threshold grid");
  if (truth.size() != dimension) {
    throw InvalidArgument("config: truth has " + std::to_string(truth.size()) +
                          " laws for dimension " + std::to_string(dimension));
  }
  if (data.total() == 0) throw InvalidArgument("config: data.strata must be >= 1");
  surrogate.validate(surrogate.train_size + surrogate.test_size);
  solver.validate();
  if (!(penalty > 0.0)) throw InvalidArgument("config: solver.penalty must be > 0");
  for (std::size_t d : constraints.partial_dims) {
    if (d >= dimension) throw InvalidArgument("config: partial dimension out of range");
  }
  if (sweep.enabled) {
    if (sweep.spec.design_dim >= dimension) {
      throw InvalidArgument("config: sweep.design_dim out of range");
    }
    if (sweep.spec.mean_grid.empty()) throw InvalidArgument("config: empty sweep grid");
    bool listed = false;
    for (double t : thresholds) listed |= t == sweep.threshold;
    if (!listed) throw InvalidArgument("config: sweep.threshold must be one of thresholds");
  }
}

RunConfig parse_run_config(const json& document, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.document = document;
  Section root(document, "");
  root.get("seed", cfg.seed);
  root.get("threads", cfg.threads);
  std::string out_dir = cfg.output_dir.string();
  root.get("output_dir", out_dir);
  cfg.output_dir = out_dir;
  root.get("dimension", cfg.dimension);

  if (root.has("response")) {
    Section s = root.child("response");
    std::string kind = "synthetic";
    s.get("kind", kind);
    if (kind == "synthetic") {
      auto& d = cfg.response.synthetic;
      s.get("exponent", d.exponent);
      s.get("anchor_deflection", d.anchor_deflection);
      s.get("plastic_strain", d.plastic_strain);
      s.get("strain_rate", d.strain_rate);
      s.get("temperature", d.temperature);
    } else if (kind == "external") {
      cfg.response.kind = ResponseKind::External;
      std::string table;
      s.get("table", table);
      if (table.empty()) throw InvalidArgument("config: response.table is required");
      cfg.response.table = std::filesystem::path(table).is_absolute()
                               ? std::filesystem::path(table)
                               : base_dir / table;
    } else {
      throw InvalidArgument("config: unknown response.kind '" + kind + "'");
    }
    s.finish();
  }

  if (root.has("data")) {
    Section s = root.child("data");
    s.get("strata", cfg.data.strata);
    s.get("per_stratum", cfg.data.per_stratum);
    s.finish();
  }
  cfg.data.seed = cfg.data_seed();
  root.get("thresholds", cfg.thresholds);

  cfg.truth.assign(cfg.dimension, UnivariateLaw::uniform());
  if (root.has("truth")) {
    const json& node = root.raw("truth");
    if (node.is_array()) {
      cfg.truth.clear();
      for (std::size_t d = 0; d < node.size(); ++d) {
        cfg.truth.push_back(ParseLaw(node[d], "truth[" + std::to_string(d) + "]"));
      }
    } else {
      cfg.truth.assign(cfg.dimension, ParseLaw(node, "truth"));
    }
  }

  if (root.has("constraints")) {
    Section s = root.child("constraints");
    std::string kind = "mean";
    s.get("case", kind);
    if (kind == "mean") {
      cfg.constraints.kind = CaseKind::Mean;
    } else if (kind == "moments") {
      cfg.constraints.kind = CaseKind::MomentsUpTo;
    } else if (kind == "partial") {
      cfg.constraints.kind = CaseKind::Partial;
    } else {
      throw InvalidArgument("config: unknown constraints.case '" + kind + "'");
    }
    s.get("max_order", cfg.constraints.max_order);
    std::vector<std::size_t> dims;
    s.get("partial_dims", dims);
    for (std::size_t d : dims) {
      cfg.constraints.partial_dims.push_back(ZeroBased(d, "constraints.partial_dims"));
    }
    s.get("sub_lower", cfg.constraints.sub_lower);
    s.get("sub_upper", cfg.constraints.sub_upper);
    s.finish();
  }

  if (root.has("surrogate")) {
    Section s = root.child("surrogate");
    auto& t = cfg.surrogate;
    s.get("hidden", t.hidden);
    s.get("train_size", t.train_size);
    s.get("test_size", t.test_size);
    s.get("batch_size", t.batch_size);
    s.get("epochs", t.epochs);
    s.get("learning_rate", t.adam.learning_rate);
    s.get("shuffle", t.shuffle);
    s.get("target_train_loss", t.target_train_loss);
    s.finish();
  }
  cfg.surrogate.seed = cfg.train_seed();

  if (root.has("solver")) {
    Section s = root.child("solver");
    auto& o = cfg.solver;
    s.get("restarts", o.restarts);
    s.get("learning_rate", o.adam.learning_rate);
    s.get("iterations", o.adam.max_iterations);
    s.get("gradient_tolerance", o.adam.gradient_tolerance);
    s.get("sharpness", o.sharpness);
    s.get("final_sharpness", o.final_sharpness);
    s.get("feasibility_tolerance", o.feasibility_tolerance);
    s.get("feasibility_filter", o.feasibility_filter);
    s.get("penalty", cfg.penalty);
    s.finish();
  }
  cfg.solver.seed = cfg.solver_seed();
  cfg.solver.threads = cfg.threads;

  if (root.has("baseline")) {
    Section s = root.child("baseline");
    s.get("enabled", cfg.baseline.enabled);
    s.get("mc_samples", cfg.baseline.mc_samples);
    s.get("oscillation_levels", cfg.baseline.oscillation.levels);
    s.get("oscillation_points", cfg.baseline.oscillation.base_points);
    s.finish();
  }
  cfg.baseline.oscillation.seed = cfg.baseline_seed();

  cfg.sweep.threshold = cfg.thresholds.empty() ? 1.0 : cfg.thresholds.front();
  cfg.sweep.spec.mean_grid = ParseGrid(json::object(), "sweep.grid");
  if (root.has("sweep")) {
    Section s = root.child("sweep");
    cfg.sweep.enabled = true;
    s.get("enabled", cfg.sweep.enabled);
    s.get("threshold", cfg.sweep.threshold);
    std::size_t dim = 1;
    s.get("design_dim", dim);
    cfg.sweep.spec.design_dim = ZeroBased(dim, "sweep.design_dim");
    if (s.has("grid")) cfg.sweep.spec.mean_grid = ParseGrid(s.raw("grid"), "sweep.grid");
    s.get("other_mean", cfg.sweep.spec.other_mean);
    s.get("tolerances", cfg.sweep.spec.tolerances);
    s.finish();
  }
  root.finish();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(document, path.parent_path());
}

void apply_override(json& document, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidArgument("override must look like key.path=value: '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;

  json* node = &document;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw InvalidArgument("override has an empty key segment: " + key);
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::uint64_t config_hash(const json& document) {
  const std::string text = document.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace ouq
