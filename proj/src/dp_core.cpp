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

#include "ucpadp/dp_core.hpp"

#include "ucpadp/parallel.hpp"

#include <algorithm>

namespace ucpadp {

StageTable StageTable::terminal(const CartesianGrid &xgrid) {
  StageTable t;
  t.cost_to_go.assign(xgrid.size(), 0.0);
  return t;
}

std::size_t StageTable::feasible_count() const {
  return static_cast<std::size_t>(
      std::count_if(cost_to_go.begin(), cost_to_go.end(), [](double c) { return c != kInf; }));
}

TransitionTable::TransitionTable(ProblemDef problem, CartesianGrid xgrid, CartesianGrid ugrid,
                                 unsigned threads)
    : problem_(std::move(problem)), xgrid_(std::move(xgrid)), ugrid_(std::move(ugrid)) {
  validate(problem_);
  if (xgrid_.dims() != problem_.state_dim || ugrid_.dims() != problem_.control_dim)
    throw UsageError("grid dimensions do not match problem '" + problem_.name + "'");
  const std::size_t n = xgrid_.dims();
  const std::size_t nu = ugrid_.size();
  const std::size_t pairs = xgrid_.size() * nu;
  base_.assign(pairs, kUnusable);
  cost_.assign(pairs, kInf);
  frac_.assign(pairs * n, 0.0);

  parallel_for(xgrid_.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(n), u(ugrid_.dims()), next(n);
    for (std::size_t k = begin; k < end; ++k) {
      xgrid_.node_coord(k, x);
      for (std::size_t j = 0; j < nu; ++j) {
        ugrid_.node_coord(j, u);
        if (!admissible(problem_, x, u))
          continue;
        problem_.dynamics(x, u, next);
        const std::size_t pr = k * nu + j;
        std::size_t base = 0;
        if (!xgrid_.cell_coords(next, base, {frac_.data() + pr * n, n}))
          continue;
        base_[pr] = base;
        cost_[pr] = relaxed_cost(problem_, x, u);
      }
    }
  });
}

StageTable backward_step(const TransitionTable &tt, const StageTable &prev, unsigned threads) {
  const auto &xgrid = tt.state_grid();
  const std::size_t nu = tt.control_grid().size();
  if (prev.cost_to_go.size() != xgrid.size())
    throw UsageError("previous cost-to-go does not match state grid");
  StageTable out;
  out.cost_to_go.assign(xgrid.size(), kInf);
  out.policy.assign(xgrid.size(), kNoControl);
  parallel_for(xgrid.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      double best = kInf;
      std::uint32_t arg = kNoControl;
      for (std::size_t j = 0; j < nu; ++j) {
        const std::size_t pr = tt.pair(k, j);
        if (!tt.usable(pr))
          continue;
        const double c =
            tt.stage_cost(pr) + interpolate_at(xgrid, prev.cost_to_go, tt.base(pr), tt.frac(pr));
        if (c < best) {
          best = c;
          arg = static_cast<std::uint32_t>(j);
        }
      }
      out.cost_to_go[k] = best;
      out.policy[k] = arg;
    }
  });
  return out;
}

StageTable backward_step(const ProblemDef &p, const CartesianGrid &xgrid,
                         const CartesianGrid &ugrid, const StageTable &prev) {
  validate(p);
  if (prev.cost_to_go.size() != xgrid.size())
    throw UsageError("previous cost-to-go does not match state grid");
  const std::size_t n = xgrid.dims();
  StageTable out;
  out.cost_to_go.assign(xgrid.size(), kInf);
  out.policy.assign(xgrid.size(), kNoControl);
  std::vector<double> x(n), u(ugrid.dims()), next(n), frac(n);
  for (std::size_t k = 0; k < xgrid.size(); ++k) {
    xgrid.node_coord(k, x);
    double best = kInf;
    std::uint32_t arg = kNoControl;
    for (std::size_t j = 0; j < ugrid.size(); ++j) {
      ugrid.node_coord(j, u);
      if (!admissible(p, x, u))
        continue;
      p.dynamics(x, u, next);
      std::size_t base = 0;
      if (!xgrid.cell_coords(next, base, frac))
        continue;
      const double c = relaxed_cost(p, x, u) + interpolate_at(xgrid, prev.cost_to_go, base, frac);
      if (c < best) {
        best = c;
        arg = static_cast<std::uint32_t>(j);
      }
    }
    out.cost_to_go[k] = best;
    out.policy[k] = arg;
  }
  return out;
}

BackwardRecursion::BackwardRecursion(ProblemDef problem, CartesianGrid xgrid,
                                     CartesianGrid ugrid, unsigned threads)
    : tt_(std::move(problem), std::move(xgrid), std::move(ugrid), threads), threads_(threads),
      terminal_(StageTable::terminal(tt_.state_grid())) {}

void BackwardRecursion::extend_to(std::size_t horizon) {
  stages_.reserve(horizon);
  while (stages_.size() < horizon) {
    const StageTable &prev = stages_.empty() ? terminal_ : stages_.back();
    stages_.push_back(backward_step(tt_, prev, threads_));
  }
}

const StageTable &BackwardRecursion::first_stage() const {
  if (stages_.empty())
    throw UsageError("no backward stage computed yet");
  return stages_.back();
}

bool policy_control(const CartesianGrid &xgrid, const CartesianGrid &ugrid,
                    const StageTable &table, std::span<const double> x, std::span<double> u) {
  const std::size_t n = xgrid.dims();
  const std::size_t m = ugrid.dims();
  double frac_buf[16];
  std::size_t base = 0;
  if (!xgrid.cell_coords(x, base, {frac_buf, n}))
    return false;
  const std::span<const double> frac(frac_buf, n);
  double ucoord[16];
  std::fill(u.begin(), u.end(), 0.0);
  const std::size_t corners = std::size_t{1} << n;
  for (std::size_t c = 0; c < corners; ++c) {
    const double w = corner_weight(frac, c);
    if (w == 0.0)
      continue;
    const std::uint32_t j = table.policy[xgrid.corner_index(base, c)];
    if (j == kNoControl)
      return false;
    ugrid.node_coord(j, {ucoord, m});
    for (std::size_t i = 0; i < m; ++i)
      u[i] += w * ucoord[i];
  }
  return true;
}

ForwardEnsemble seed_ensemble(const CartesianGrid &xgrid, const StageTable &first_stage) {
  if (first_stage.policy.size() != xgrid.size())
    throw UsageError("seed needs a stage table with a policy over the state grid");
  ForwardEnsemble ens;
  ens.state_dim = xgrid.dims();
  ens.states.resize(xgrid.size() * xgrid.dims());
  ens.feasible.resize(xgrid.size());
  for (std::size_t k = 0; k < xgrid.size(); ++k) {
    xgrid.node_coord(k, ens.state(k));
    ens.feasible[k] = first_stage.policy[k] != kNoControl ? 1 : 0;
  }
  return ens;
}

ForwardEnsemble forward_step(const ProblemDef &p, const CartesianGrid &xgrid,
                             const CartesianGrid &ugrid, const StageTable &policy_table,
                             const ForwardEnsemble &ens, unsigned threads) {
  if (policy_table.policy.size() != xgrid.size())
    throw UsageError("forward step needs a stage table with a policy");
  if (xgrid.dims() > 16 || ugrid.dims() > 16)
    throw UsageError("grid dimension too large");
  ForwardEnsemble out = ens;
  out.step = ens.step + 1;
  const std::size_t n = xgrid.dims();
  parallel_for(ens.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> u(ugrid.dims()), next(n);
    for (std::size_t i = begin; i < end; ++i) {
      if (!out.feasible[i])
        continue;
      const auto x = ens.state(i);
      if (!policy_control(xgrid, ugrid, policy_table, x, u) || !admissible(p, x, u)) {
        out.feasible[i] = 0;
        continue;
      }
      p.dynamics(x, u, next);
      if (!xgrid.contains(next)) {
        out.feasible[i] = 0;
        continue;
      }
      std::copy(next.begin(), next.end(), out.state(i).begin());
    }
  });
  return out;
}

std::vector<std::size_t> feasible_indices(const ForwardEnsemble &ens) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ens.size(); ++i)
    if (ens.feasible[i])
      idx.push_back(i);
  return idx;
}

} // namespace ucpadp
