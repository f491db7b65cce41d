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

#include "ucpadp/dp_core.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ucpadp {

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  /// Per control axis. Empty selects 2 * control spacing.
  Vec eps_mu;
  /// Per state axis. Empty selects 2 * state spacing.
  Vec eps_x;
  std::size_t n_init = 5;
  std::size_t n_max = 10000;
  /// Cumulative horizon multiplier between tests.
  std::size_t growth = 3;
  /// 0 selects one worker per hardware thread.
  unsigned threads = 1;
  /// One line per tested horizon when set.
  std::ostream *progress = nullptr;

  /// Fills empty tolerances and checks the configuration against the grids.
  void resolve(const CartesianGrid &xgrid, const CartesianGrid &ugrid);
};

struct ConvergenceMetrics {
  std::size_t horizon = 0;
  Vec delta_mu;
  Vec delta_x;
  /// Gridded initial conditions feasible under the first-stage policy.
  std::size_t seeded_count = 0;
  /// Entries still feasible after ceil(N/2) closed-loop steps.
  std::size_t feasible_count = 0;
  bool passed = false;
};

enum class SolveStatus { converged, hit_n_max };

const char *to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::hit_n_max;
  std::size_t terminal_horizon = 0;
  StageTable first_stage_policy;
  std::vector<ConvergenceMetrics> metrics;
  ForwardEnsemble final_ensemble;
  Vec terminal_mean;
  /// Tail mean of the average function along the closed loop from the
  /// terminal mean state; empty if that rollout leaves the feasible region.
  std::optional<double> achieved_average;
  double wall_time_s = 0.0;
};

/// Strict componentwise test delta < eps.
bool within(std::span<const double> delta, std::span<const double> eps);

/// Largest deviation, per control axis, between the first-stage policy and
/// the back-calculated policies j in [ceil(N/2), N] at the survivor nodes.
/// `stages` is in back-calculation order (stages.back() is the first stage).
Vec delta_mu(std::span<const StageTable> stages, std::span<const std::size_t> survivors,
             const CartesianGrid &ugrid);

/// Mean of the feasible entries, accumulated in entry order.
Vec feasible_mean(const ForwardEnsemble &ens);

/// Largest deviation, per state axis, of feasible entries from their mean.
Vec delta_x(const ForwardEnsemble &ens);

/// Grows the horizon until both deviation tests pass or the next horizon
/// would exceed n_max.
SolveReport solve(const ProblemDef &p, const CartesianGrid &xgrid, const CartesianGrid &ugrid,
                  SolverConfig cfg);

/// Mean of the average function over the last `tail` steps of a `horizon`
/// step stationary closed loop from x0.
double achieved_average(const ProblemDef &p, const CartesianGrid &xgrid,
                        const CartesianGrid &ugrid, const StageTable &policy,
                        std::span<const double> x0, std::size_t horizon, std::size_t tail);

} // namespace ucpadp
