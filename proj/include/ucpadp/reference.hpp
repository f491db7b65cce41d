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

#pragma once

#include "ucpadp/rollout.hpp"
#include "ucpadp/solver.hpp"

#include <span>
#include <vector>

namespace ucpadp {

/// Policies of the explicit N-horizon problem in forward-time order: entry k
/// is the policy applied k samples after the start.
std::vector<StageTable> finite_horizon_policies(const ProblemDef &p, const CartesianGrid &xgrid,
                                                const CartesianGrid &ugrid, std::size_t horizon,
                                                unsigned threads = 1);

struct SweepRow {
  std::size_t problem_horizon = 0;
  /// Initial nodes whose stationary closed loop stays feasible for the whole
  /// trajectory horizon, with their time-averaged relaxed cost.
  std::vector<std::size_t> nodes;
  Vec average_cost;

  std::size_t feasible_count() const { return nodes.size(); }
  double min_cost() const;
  double max_cost() const;
  double mean_cost() const;
};

/// Cost of applying the first-stage policy of each problem horizon as a
/// stationary policy from every gridded initial node.
std::vector<SweepRow> horizon_sweep(const ProblemDef &p, const CartesianGrid &xgrid,
                                    const CartesianGrid &ugrid,
                                    std::span<const std::size_t> problem_horizons,
                                    std::size_t trajectory_horizon, unsigned threads = 1);

/// UCPADP closed loop against an explicit long-horizon solution from one
/// initial state, both simulated over the reference horizon.
struct Comparison {
  SolveReport solve;
  std::size_t reference_horizon = 0;
  RolloutTrace ucpadp;
  RolloutTrace reference;

  double ucpadp_cost() const { return ucpadp.mean_stage_cost(); }
  double reference_cost() const { return reference.mean_stage_cost(); }
  /// |a - b| / |b|, or |a - b| when b == 0.
  double cost_deviation() const;
  double control_energy_deviation() const;
};

Comparison compare_with_reference(const ProblemDef &p, const CartesianGrid &xgrid,
                                  const CartesianGrid &ugrid, const SolverConfig &cfg,
                                  std::size_t multiplier, std::span<const double> x0);

double relative_deviation(double value, double reference);

} // namespace ucpadp
