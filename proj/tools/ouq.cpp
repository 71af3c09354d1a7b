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

// Command-line front end: one subcommand per pipeline stage.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ouq/error.hpp"
#include "ouq/log.hpp"
#include "ouq/pipeline.hpp"
#include "ouq/verify.hpp"

namespace {

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
  bool verbose = false;
  bool quiet = false;
};

ouq::RunConfig BuildConfigOrThrow(const Options& opt) {
  nlohmann::json document = nlohmann::json::object();
  std::filesystem::path base;
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in) throw ouq::InvalidArgument("cannot open config " + opt.config);
    document = nlohmann::json::parse(in);
    base = std::filesystem::path(opt.config).parent_path();
  }
  for (const auto& o : opt.overrides) ouq::apply_override(document, o);
  if (opt.seed) document["seed"] = *opt.seed;
  if (opt.threads) document["threads"] = *opt.threads;
  if (!opt.out.empty()) document["output_dir"] = opt.out;
  return ouq::parse_run_config(document, base);
}

// Reading the configuration is part of the "config" stage.
ouq::RunConfig BuildConfig(const Options& opt) {
  try {
    return BuildConfigOrThrow(opt);
  } catch (const std::exception& e) {
    throw ouq::StageError("config", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal uncertainty quantification with neural-network surrogates"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("-c,--config", opt.config, "JSON run configuration");
  app.add_option("--set", opt.overrides, "Override a config key, e.g. solver.restarts=20");
  app.add_option("--seed", opt.seed, "Master seed");
  app.add_option("--threads", opt.threads, "Worker threads for restarts");
  app.add_option("-o,--out", opt.out, "Output directory");
  app.add_flag("-v,--verbose", opt.verbose, "Log stage progress");
  app.add_flag("-q,--quiet", opt.quiet, "Suppress warnings");

  auto* gen = app.add_subcommand("gen-data", "Sample the design and evaluate the response");
  auto* train = app.add_subcommand("train", "Train one surrogate per threshold");
  auto* bound = app.add_subcommand("bound", "Upper and lower PoF bounds per threshold");
  auto* base = app.add_subcommand("baseline", "Monte Carlo and McDiarmid comparison");
  auto* sweep = app.add_subcommand("sweep", "Bounds along a design-mean grid");
  auto* run = app.add_subcommand("run", "Full pipeline");
  auto* verify = app.add_subcommand("verify", "Quick invariant self-test");

  CLI11_PARSE(app, argc, argv);
  if (opt.quiet) ouq::log::level() = ouq::log::Level::Quiet;
  if (opt.verbose) ouq::log::level() = ouq::log::Level::Info;

  try {
    if (verify->parsed()) {
      return ouq::report_checks(ouq::run_invariant_checks(), std::cout) ? 0 : 1;
    }
    ouq::RunConfig config = BuildConfig(opt);
    if (sweep->parsed()) config.sweep.enabled = true;
    ouq::Pipeline pipeline(std::move(config));
    if (run->parsed()) {
      pipeline.run();
    } else {
      pipeline.check_inputs();
      if (gen->parsed()) pipeline.gen_data();
      if (train->parsed()) pipeline.train();
      if (bound->parsed()) pipeline.bound();
      if (base->parsed()) pipeline.baseline();
      if (sweep->parsed()) pipeline.sweep();
    }
    std::cout << "wrote " << pipeline.config().output_dir.string() << '\n';
  } catch (const ouq::StageError& e) {
    std::cerr << "error in stage " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
