/*
 * Copyright 2026 The ucpadp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ucpadp/reference.hpp"

#include "ucpadp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ucpadp {

std::vector<StageTable> finite_horizon_policies(const ProblemDef &p, const CartesianGrid &xgrid,
                                                const CartesianGrid &ugrid, std::size_t horizon,
                                                unsigned threads) {
  if (horizon < 1)
    throw UsageError("reference horizon must be at least 1");
  BackwardRecursion rec(p, xgrid, ugrid, threads);
  rec.extend_to(horizon);
  std::vector<StageTable> out(rec.stages().rbegin(), rec.stages().rend());
  return out;
}

double SweepRow::min_cost() const {
  return average_cost.empty() ? kInf : *std::min_element(average_cost.begin(), average_cost.end());
}

double SweepRow::max_cost() const {
  return average_cost.empty() ? kInf : *std::max_element(average_cost.begin(), average_cost.end());
}

double SweepRow::mean_cost() const {
  if (average_cost.empty())
    return kInf;
  return std::accumulate(average_cost.begin(), average_cost.end(), 0.0) /
         static_cast<double>(average_cost.size());
}

namespace {

// Average relaxed cost of a stationary closed loop, or NaN if it becomes
// infeasible before `steps` steps.
double closed_loop_average(const ProblemDef &p, const CartesianGrid &xgrid,
                           const CartesianGrid &ugrid, const StageTable &policy,
                           std::span<const double> x0, std::size_t steps) {
  Vec x(x0.begin(), x0.end()), u(ugrid.dims()), next(x.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (!policy_control(xgrid, ugrid, policy, x, u) || !admissible(p, x, u))
      return std::nan("");
    p.dynamics(x, u, next);
    if (!xgrid.contains(next))
      return std::nan("");
    sum += relaxed_cost(p, x, u);
    std::swap(x, next);
  }
  return sum / static_cast<double>(steps);
}

} // namespace

std::vector<SweepRow> horizon_sweep(const ProblemDef &p, const CartesianGrid &xgrid,
                                    const CartesianGrid &ugrid,
                                    std::span<const std::size_t> problem_horizons,
                                    std::size_t trajectory_horizon, unsigned threads) {
  if (problem_horizons.empty())
    throw UsageError("horizon list is empty");
  const std::size_t longest = *std::max_element(problem_horizons.begin(), problem_horizons.end());
  if (*std::min_element(problem_horizons.begin(), problem_horizons.end()) < 1)
    throw UsageError("problem horizons must be at least 1");
  if (trajectory_horizon < longest)
    throw UsageError("trajectory horizon must be at least the longest problem horizon");

  BackwardRecursion rec(p, xgrid, ugrid, threads);
  std::vector<SweepRow> rows;
  for (std::size_t h : problem_horizons) {
    rec.extend_to(std::max(rec.horizon(), h));
    const StageTable &policy = rec.stages()[h - 1];
    Vec cost(xgrid.size(), std::nan(""));
    parallel_for(xgrid.size(), threads, [&](std::size_t begin, std::size_t end) {
      Vec x0(xgrid.dims());
      for (std::size_t k = begin; k < end; ++k) {
        if (policy.policy[k] == kNoControl)
          continue;
        xgrid.node_coord(k, x0);
        cost[k] = closed_loop_average(p, xgrid, ugrid, policy, x0, trajectory_horizon);
      }
    });
    SweepRow row;
    row.problem_horizon = h;
    for (std::size_t k = 0; k < cost.size(); ++k) {
      if (std::isnan(cost[k]))
        continue;
      row.nodes.push_back(k);
      row.average_cost.push_back(cost[k]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double relative_deviation(double value, double reference) {
  const double diff = std::abs(value - reference);
  return reference == 0.0 ? diff : diff / std::abs(reference);
}

double Comparison::cost_deviation() const {
  return relative_deviation(ucpadp_cost(), reference_cost());
}

double Comparison::control_energy_deviation() const {
  return relative_deviation(ucpadp.control_energy(), reference.control_energy());
}

Comparison compare_with_reference(const ProblemDef &p, const CartesianGrid &xgrid,
                                  const CartesianGrid &ugrid, const SolverConfig &cfg,
                                  std::size_t multiplier, std::span<const double> x0) {
  if (multiplier < 1)
    throw UsageError("reference multiplier must be at least 1");
  Comparison cmp;
  cmp.solve = solve(p, xgrid, ugrid, cfg);
  cmp.reference_horizon = multiplier * cmp.solve.terminal_horizon;
  const auto policies =
      finite_horizon_policies(p, xgrid, ugrid, cmp.reference_horizon, cfg.threads);
  cmp.reference = rollout_time_varying(p, xgrid, ugrid, policies, x0);
  cmp.ucpadp = rollout_stationary(p, xgrid, ugrid, cmp.solve.first_stage_policy, x0,
                                  cmp.reference_horizon);
  return cmp;
}

} // namespace ucpadp
