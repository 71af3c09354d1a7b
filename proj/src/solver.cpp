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

#include "ouq/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "ouq/error.hpp"

namespace ouq {

std::string to_string(Direction direction) {
  return direction == Direction::Upper ? "upper" : "lower";
}

Direction parse_direction(const std::string& text) {
  if (text == "upper" || text == "sup") return Direction::Upper;
  if (text == "lower" || text == "inf") return Direction::Lower;
  throw InvalidArgument("unknown bound direction '" + text + "'");
}

void SolverConfig::validate() const {
  if (restarts == 0) throw InvalidArgument("SolverConfig: restarts must be >= 1");
  if (!(sharpness > 0.0)) throw InvalidArgument("SolverConfig: sharpness must be > 0");
  if (!(final_sharpness > 0.0)) {
    throw InvalidArgument("SolverConfig: final_sharpness must be > 0");
  }
  if (!(feasibility_tolerance > 0.0)) {
    throw InvalidArgument("SolverConfig: feasibility tolerance must be > 0");
  }
  adam.validate();
}

void OuqProblem::validate() const {
  set.validate();
  penalties.validate(set.num_constraints());
  config.validate();
  if (!surrogate) throw InvalidArgument("OuqProblem: no surrogate");
  if (surrogate->dimension() != dimension()) {
    throw InvalidArgument("OuqProblem: surrogate dimension does not match the domain");
  }
}

namespace {

double Logistic(double z) { return sigmoid(z); }

double Logit(double x) {
  x = std::clamp(x, 1e-12, 1.0 - 1e-12);
  return std::log(x / (1.0 - x));
}

bool Better(Direction direction, double a, double b) {
  return direction == Direction::Upper ? a > b : a < b;
}

}  // namespace

MeasureParams MeasureParams::encode(std::span<const double> points,
                                    std::span<const double> weights,
                                    std::size_t dimension) {
  MeasureParams p(weights.size(), dimension);
  auto z = p.logits();
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = Logit(points[k]);
  auto w = p.raw_weights();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sqrt(std::max(weights[i], 0.0));
  return p;
}

void MeasureParams::decode(std::span<const double> values, std::size_t support,
                           std::size_t dimension, std::vector<double>& points,
                           std::vector<double>& weights) {
  points.resize(support * dimension);
  weights.resize(support);
  for (std::size_t k = 0; k < support * dimension; ++k) points[k] = Logistic(values[k]);
  for (std::size_t i = 0; i < support; ++i) {
    const double w = values[support * dimension + i];
    weights[i] = w * w;
  }
}

double sharpness_at(const SolverConfig& config, std::size_t iteration) {
  const std::size_t n = config.adam.max_iterations;
  if (n <= 1 || config.final_sharpness == config.sharpness) return config.sharpness;
  const double f = static_cast<double>(std::min(iteration, n - 1)) / static_cast<double>(n - 1);
  return config.sharpness * std::pow(config.final_sharpness / config.sharpness, f);
}

double ouq_loss(std::span<const double> params, const OuqProblem& problem,
                std::span<double> gradient) {
  return ouq_loss(params, problem, gradient, problem.config.sharpness);
}

double ouq_loss(std::span<const double> params, const OuqProblem& problem,
                std::span<double> gradient, double sharpness) {
  const std::size_t q = problem.support_size();
  const std::size_t m = problem.dimension();
  const std::size_t k_count = problem.set.num_constraints();
  if (params.size() != q * (m + 1) || gradient.size() != params.size()) {
    throw InvalidArgument("ouq_loss: parameter vector has wrong size");
  }
  const double sign = problem.direction == Direction::Upper ? -1.0 : 1.0;

  thread_local std::vector<double> points, weights, score, score_grad, g_val, g_grad;
  MeasureParams::decode(params, q, m, points, weights);
  score.resize(q);
  score_grad.resize(q * m);
  g_val.resize(q * k_count);
  g_grad.resize(q * k_count * m);

  double objective = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    PointView x(points.data() + i * m, m);
    score[i] = problem.surrogate->value_and_gradient(
        x, std::span<double>(score_grad.data() + i * m, m));
    objective += weights[i] * score[i];
    total += weights[i];
    for (std::size_t j = 0; j < k_count; ++j) {
      g_val[i * k_count + j] = problem.set.constraints[j].integrand_gradient(
          x, std::span<double>(g_grad.data() + (i * k_count + j) * m, m), sharpness);
    }
  }

  const double lambda0 = problem.penalties.normalization;
  double loss = sign * objective + lambda0 * (total - 1.0) * (total - 1.0);
  // coef_j = 2 lambda_j r_j
  thread_local std::vector<double> coef;
  coef.assign(k_count, 0.0);
  for (std::size_t j = 0; j < k_count; ++j) {
    double r = -problem.set.constraints[j].target;
    for (std::size_t i = 0; i < q; ++i) r += weights[i] * g_val[i * k_count + j];
    const double lambda = problem.penalties.constraint[j];
    loss += lambda * r * r;
    coef[j] = 2.0 * lambda * r;
  }
  if (!std::isfinite(loss)) throw NumericError("ouq_loss: non-finite loss");

  const double d_total = 2.0 * lambda0 * (total - 1.0);
  for (std::size_t i = 0; i < q; ++i) {
    double d_t = sign * score[i] + d_total;
    for (std::size_t j = 0; j < k_count; ++j) d_t += coef[j] * g_val[i * k_count + j];
    const double w = params[q * m + i];
    gradient[q * m + i] = d_t * 2.0 * w;

    for (std::size_t d = 0; d < m; ++d) {
      double d_x = sign * weights[i] * score_grad[i * m + d];
      for (std::size_t j = 0; j < k_count; ++j) {
        d_x += coef[j] * weights[i] * g_grad[(i * k_count + j) * m + d];
      }
      const double x = points[i * m + d];
      gradient[i * m + d] = d_x * x * (1.0 - x);
    }
  }
  return loss;
}

namespace {

struct Evaluation {
  double smoothed = 0.0;
  double exact = 0.0;
  double max_residual = 0.0;
};

Evaluation Evaluate(const OuqProblem& problem, const DiscreteMeasure& measure) {
  Evaluation e;
  e.smoothed = std::clamp(
      expectation(measure, [&](PointView x) { return problem.surrogate->value(x); }), 0.0, 1.0);
  if (problem.exact_indicator) {
    e.exact = pof_under_measure(measure, *problem.exact_indicator);
  } else {
    e.exact = pof_under_measure(
        measure, [&](PointView x) { return problem.surrogate->value(x) >= 0.5; });
  }
  e.max_residual = max_abs_residual(problem.set, WeightedPoints::of(measure));
  return e;
}

}  // namespace

std::pair<RestartRecord, std::optional<DiscreteMeasure>> optimize_restart(
    const OuqProblem& problem, std::size_t index) {
  problem.validate();
  const std::size_t q = problem.support_size();
  const std::size_t m = problem.dimension();
  RestartRecord record;
  record.index = index;
  record.seed = problem.config.seed + index;

  std::mt19937_64 rng(record.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> points(q * m);
  std::vector<double> weights(q);
  for (double& x : points) x = std::clamp(unit(rng), 1e-6, 1.0 - 1e-6);
  double total = 0.0;
  for (double& t : weights) {
    t = unit(rng) + 1e-12;
    total += t;
  }
  for (double& t : weights) t /= total;
  auto init = MeasureParams::encode(points, weights, m);

  MinimizeResult run;
  try {
    std::size_t iteration = 0;  // adam_minimize evaluates once per step
    run = adam_minimize(
        [&](std::span<const double> p, std::span<double> g) {
          return ouq_loss(p, problem, g, sharpness_at(problem.config, iteration++));
        },
        std::move(init.values), problem.config.adam);
  } catch (const NumericError& e) {
    record.failed = true;
    record.failure = e.what();
    return {record, std::nullopt};
  }
  record.final_loss = run.value;
  record.iterations = run.iterations;

  MeasureParams::decode(run.params, q, m, points, weights);
  const auto projected = project_to_simplex(weights);
  // Renormalize the rounding residue so the measure invariant holds exactly.
  double sum = 0.0;
  for (double t : projected) sum += t;
  std::vector<double> final_weights(projected);
  for (double& t : final_weights) t /= sum;
  DiscreteMeasure measure(m, std::move(points), std::move(final_weights));

  const auto eval = Evaluate(problem, measure);
  record.smoothed = eval.smoothed;
  record.exact = eval.exact;
  record.max_residual = eval.max_residual;
  record.feasible = eval.max_residual < problem.config.feasibility_tolerance;
  return {record, std::move(measure)};
}

BoundResult solve(const OuqProblem& problem) {
  problem.validate();
  const std::size_t restarts = problem.config.restarts;
  std::vector<RestartRecord> records(restarts);
  std::vector<std::optional<DiscreteMeasure>> measures(restarts);

  auto run_one = [&](std::size_t r) {
    auto [record, measure] = optimize_restart(problem, r);
    records[r] = std::move(record);
    measures[r] = std::move(measure);
  };
  const std::size_t threads = std::clamp<std::size_t>(problem.config.threads, 1, restarts);
  if (threads == 1) {
    for (std::size_t r = 0; r < restarts; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < restarts; r = next++) run_one(r);
      });
    }
  }

  BoundResult result;
  result.direction = problem.direction;
  result.exact_available = problem.exact_indicator.has_value();
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < restarts; ++r) {
    const auto& rec = records[r];
    if (rec.failed) continue;
    if (rec.feasible) ++result.restarts_feasible;
    if (problem.config.feasibility_filter && !rec.feasible) continue;
    if (!best || Better(problem.direction, rec.exact, records[*best].exact) ||
        (rec.exact == records[*best].exact &&
         Better(problem.direction, rec.smoothed, records[*best].smoothed))) {
      best = r;
    }
  }
  result.feasible = best.has_value();
  if (!best) {
    for (std::size_t r = 0; r < restarts; ++r) {
      if (records[r].failed) continue;
      if (!best || records[r].max_residual < records[*best].max_residual) best = r;
    }
  }
  if (best) {
    const auto& rec = records[*best];
    result.bound = rec.smoothed;
    result.exact_bound = rec.exact;
    result.max_residual = rec.max_residual;
    result.measure = measures[*best];
  } else {
    result.bound = std::numeric_limits<double>::quiet_NaN();
    result.exact_bound = std::numeric_limits<double>::quiet_NaN();
    result.max_residual = std::numeric_limits<double>::quiet_NaN();
  }
  result.restarts = std::move(records);
  return result;
}

BoundResult brute_force_bound(const OuqProblem& problem, std::size_t grid_resolution,
                              std::size_t max_evaluations) {
  problem.set.validate();
  if (!problem.exact_indicator) {
    throw InvalidArgument("brute_force_bound: needs an exact indicator");
  }
  if (problem.set.num_constraints() > 1) {
    throw InvalidArgument("brute_force_bound: supports at most one constraint");
  }
  if (grid_resolution == 0) throw InvalidArgument("brute_force_bound: grid must be >= 1");
  const std::size_t m = problem.dimension();
  std::size_t per_axis = grid_resolution + 1;
  std::size_t grid_points = 1;
  for (std::size_t d = 0; d < m; ++d) {
    if (grid_points > max_evaluations / per_axis) {
      throw InvalidArgument("brute_force_bound: grid too large");
    }
    grid_points *= per_axis;
  }
  const bool pairs = problem.set.num_constraints() == 1;
  if (pairs && grid_points > max_evaluations / grid_points) {
    throw InvalidArgument("brute_force_bound: " + std::to_string(grid_points) +
                          "^2 pairs exceed the evaluation limit");
  }

  // Tabulate the grid once.
  std::vector<double> coords(grid_points * m);
  std::vector<double> unsafe(grid_points);
  std::vector<double> g(grid_points, 0.0);
  for (std::size_t p = 0; p < grid_points; ++p) {
    std::size_t rest = p;
    for (std::size_t d = 0; d < m; ++d) {
      coords[p * m + d] = static_cast<double>(rest % per_axis) / static_cast<double>(grid_resolution);
      rest /= per_axis;
    }
    PointView x(coords.data() + p * m, m);
    unsafe[p] = (*problem.exact_indicator)(x) ? 1.0 : 0.0;
    if (pairs) g[p] = problem.set.constraints[0].integrand(x, false);
  }

  BoundResult result;
  result.direction = problem.direction;
  result.exact_available = true;
  double best = problem.direction == Direction::Upper ? -1.0 : 2.0;
  std::vector<double> best_points;
  std::vector<double> best_weights;
  auto consider = [&](double value, std::initializer_list<std::size_t> atoms,
                      std::initializer_list<double> weights) {
    if (!Better(problem.direction, value, best)) return;
    best = value;
    best_points.clear();
    for (std::size_t a : atoms) {
      best_points.insert(best_points.end(), coords.begin() + static_cast<long>(a * m),
                         coords.begin() + static_cast<long>((a + 1) * m));
    }
    best_weights.assign(weights);
  };

  if (!pairs) {
    for (std::size_t a = 0; a < grid_points; ++a) consider(unsafe[a], {a}, {1.0});
  } else {
    const double c = problem.set.constraints[0].target;
    constexpr double kExact = 1e-12;
    for (std::size_t a = 0; a < grid_points; ++a) {
      if (std::abs(g[a] - c) <= kExact) consider(unsafe[a], {a}, {1.0});
      for (std::size_t b = 0; b < grid_points; ++b) {
        const double denom = g[a] - g[b];
        if (std::abs(denom) <= kExact) continue;
        const double w = (c - g[b]) / denom;
        if (w < 0.0 || w > 1.0) continue;
        consider(w * unsafe[a] + (1.0 - w) * unsafe[b], {a, b}, {w, 1.0 - w});
      }
    }
  }

  RestartRecord record;
  result.feasible = !best_weights.empty();
  if (result.feasible) {
    result.bound = best;
    result.exact_bound = best;
    result.measure = DiscreteMeasure(m, best_points, best_weights);
    result.max_residual = max_abs_residual(problem.set, WeightedPoints::of(*result.measure));
    result.restarts_feasible = 1;
    record.exact = record.smoothed = best;
    record.max_residual = result.max_residual;
    record.feasible = true;
  } else {
    result.bound = result.exact_bound = result.max_residual =
        std::numeric_limits<double>::quiet_NaN();
    record.failed = true;
    record.failure = "no grid measure satisfies the constraints";
  }
  result.restarts.push_back(record);
  return result;
}

}  // namespace ouq
