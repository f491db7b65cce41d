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

#include "ucpadp/grid.hpp"
#include "ucpadp/problem.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ucpadp {

inline constexpr std::uint32_t kNoControl = UINT32_MAX;

/// One backward stage: cumulative relaxed cost-to-go over the state grid and
/// the minimizing control node (flat row-major index into the control grid).
/// A node is infeasible iff its cost is +inf iff its policy is kNoControl.
struct StageTable {
  NodeField cost_to_go;
  /// Empty for the terminal table, which carries no decision.
  std::vector<std::uint32_t> policy;

  /// C_0 == 0 over the whole grid.
  static StageTable terminal(const CartesianGrid &xgrid);

  bool feasible(std::size_t k) const { return cost_to_go[k] != kInf; }
  std::size_t feasible_count() const;
  bool operator==(const StageTable &) const = default;
};

/// Per (state node, control node) data of one backward step that does not
/// depend on the stage: admissibility, relaxed stage cost and the cell of the
/// successor state. Pair index is state_index * |U| + control_index.
class TransitionTable {
public:
  TransitionTable(ProblemDef problem, CartesianGrid xgrid, CartesianGrid ugrid,
                  unsigned threads = 1);

  const ProblemDef &problem() const { return problem_; }
  const CartesianGrid &state_grid() const { return xgrid_; }
  const CartesianGrid &control_grid() const { return ugrid_; }

  std::size_t pair(std::size_t x, std::size_t u) const { return x * ugrid_.size() + u; }
  /// False when g(x,u) > 0 somewhere or f_d(x,u) leaves the state box.
  bool usable(std::size_t pair) const { return base_[pair] != kUnusable; }
  double stage_cost(std::size_t pair) const { return cost_[pair]; }
  std::size_t base(std::size_t pair) const { return base_[pair]; }
  std::span<const double> frac(std::size_t pair) const {
    return {frac_.data() + pair * xgrid_.dims(), xgrid_.dims()};
  }

private:
  static constexpr std::size_t kUnusable = SIZE_MAX;

  ProblemDef problem_;
  CartesianGrid xgrid_;
  CartesianGrid ugrid_;
  std::vector<std::size_t> base_;
  std::vector<double> cost_;
  std::vector<double> frac_;
};

/// One Bellman recursion: for every state node, the minimum over admissible
/// control nodes of relaxed stage cost plus interpolated previous cost-to-go.
/// Ties resolve to the smallest control index.
StageTable backward_step(const TransitionTable &tt, const StageTable &prev, unsigned threads = 1);

/// Same recursion evaluating the problem callables directly. Bit-identical to
/// the tabulated overload.
StageTable backward_step(const ProblemDef &p, const CartesianGrid &xgrid,
                         const CartesianGrid &ugrid, const StageTable &prev);

/// Growing stack of backward stages sharing one TransitionTable. Stage i of
/// the stack is the (i+1)-th back-calculation, so the last entry is the
/// first-stage policy of the current horizon. Extending is independent of
/// the target horizon, which makes resumed runs identical to single runs.
class BackwardRecursion {
public:
  BackwardRecursion(ProblemDef problem, CartesianGrid xgrid, CartesianGrid ugrid,
                    unsigned threads = 1);

  void extend_to(std::size_t horizon);
  std::size_t horizon() const { return stages_.size(); }
  const std::vector<StageTable> &stages() const { return stages_; }
  /// Policy to apply at the start of the current horizon.
  const StageTable &first_stage() const;
  const TransitionTable &transitions() const { return tt_; }
  unsigned threads() const { return threads_; }

private:
  TransitionTable tt_;
  unsigned threads_;
  StageTable terminal_;
  std::vector<StageTable> stages_;
};

/// Interpolated control of a stage policy at x. Fails when x is off the grid
/// or a positively weighted corner is infeasible.
bool policy_control(const CartesianGrid &xgrid, const CartesianGrid &ugrid,
                    const StageTable &table, std::span<const double> x, std::span<double> u);

/// Closed-loop states of all gridded initial conditions under a fixed policy.
struct ForwardEnsemble {
  std::size_t state_dim = 0;
  /// Flat, entry-major.
  std::vector<double> states;
  std::vector<std::uint8_t> feasible;
  std::size_t step = 0;

  std::size_t size() const { return feasible.size(); }
  std::span<const double> state(std::size_t i) const {
    return {states.data() + i * state_dim, state_dim};
  }
  std::span<double> state(std::size_t i) { return {states.data() + i * state_dim, state_dim}; }
};

/// One entry per state node, feasible where the first-stage policy is.
ForwardEnsemble seed_ensemble(const CartesianGrid &xgrid, const StageTable &first_stage);

/// Applies the interpolated policy once to every feasible entry. Entries that
/// hit an infeasible corner, violate g or leave the box are dropped and keep
/// their last state.
ForwardEnsemble forward_step(const ProblemDef &p, const CartesianGrid &xgrid,
                             const CartesianGrid &ugrid, const StageTable &policy_table,
                             const ForwardEnsemble &ens, unsigned threads = 1);

/// Initial-node indices still feasible.
std::vector<std::size_t> feasible_indices(const ForwardEnsemble &ens);

} // namespace ucpadp
