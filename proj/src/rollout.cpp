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

#include "ucpadp/rollout.hpp"

#include <numeric>

namespace ucpadp {

namespace {

// Advances trace by one step under table. Returns false and records the
// reason when the step is infeasible.
bool advance(const ProblemDef &p, const CartesianGrid &xgrid, const CartesianGrid &ugrid,
             const StageTable &table, RolloutTrace &trace) {
  const Vec &x = trace.states.back();
  Vec u(ugrid.dims());
  if (!policy_control(xgrid, ugrid, table, x, u)) {
    trace.truncation = "state outside the policy's feasible region";
    return false;
  }
  if (!admissible(p, x, u)) {
    trace.truncation = "inequality constraint violated";
    return false;
  }
  Vec next = step(p, x, u);
  if (!xgrid.contains(next)) {
    trace.truncation = "successor state left the state grid";
    return false;
  }
  trace.stage_cost.push_back(p.stage_cost(x, u));
  trace.relaxed_cost.push_back(relaxed_cost(p, x, u));
  trace.average_value.push_back(p.average_fn(x, u));
  trace.controls.push_back(std::move(u));
  trace.states.push_back(std::move(next));
  return true;
}

RolloutTrace start(const ProblemDef &p, std::span<const double> x0) {
  if (x0.size() != p.state_dim)
    throw UsageError("initial state has wrong dimension");
  RolloutTrace trace;
  trace.states.emplace_back(x0.begin(), x0.end());
  return trace;
}

double mean_from(const Vec &v, std::size_t first) {
  if (first >= v.size())
    return 0.0;
  return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(first), v.end(), 0.0) /
         static_cast<double>(v.size() - first);
}

} // namespace

double RolloutTrace::mean_stage_cost(std::size_t first) const {
  return mean_from(stage_cost, first);
}

double RolloutTrace::mean_relaxed_cost(std::size_t first) const {
  return mean_from(relaxed_cost, first);
}

double RolloutTrace::mean_average_value(std::size_t first) const {
  return mean_from(average_value, first);
}

double RolloutTrace::control_energy() const {
  double s = 0.0;
  for (const auto &u : controls)
    for (double v : u)
      s += v * v;
  return s;
}

RolloutTrace rollout_stationary(const ProblemDef &p, const CartesianGrid &xgrid,
                                const CartesianGrid &ugrid, const StageTable &policy,
                                std::span<const double> x0, std::size_t horizon) {
  RolloutTrace trace = start(p, x0);
  for (std::size_t k = 0; k < horizon; ++k) {
    if (!advance(p, xgrid, ugrid, policy, trace)) {
      if (k == 0)
        throw RolloutError(0, "initial state infeasible: " + *trace.truncation);
      break;
    }
  }
  return trace;
}

RolloutTrace rollout_time_varying(const ProblemDef &p, const CartesianGrid &xgrid,
                                  const CartesianGrid &ugrid,
                                  std::span<const StageTable> policies,
                                  std::span<const double> x0) {
  RolloutTrace trace = start(p, x0);
  for (std::size_t k = 0; k < policies.size(); ++k) {
    if (!advance(p, xgrid, ugrid, policies[k], trace)) {
      if (k == 0)
        throw RolloutError(0, "initial state infeasible: " + *trace.truncation);
      break;
    }
  }
  return trace;
}

} // namespace ucpadp
