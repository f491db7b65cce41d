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

#include "ucpadp/equilibrium.hpp"
#include "ucpadp/reference.hpp"
#include "ucpadp/rollout.hpp"
#include "ucpadp/solver.hpp"

#include <iosfwd>
#include <string>

namespace ucpadp::cli {

/// Shortest decimal text that parses back to the same double; "inf", "-inf"
/// and "nan" for non-finite values.
std::string format_real(double v);

void write_policy_csv(std::ostream &os, const CartesianGrid &xgrid, const CartesianGrid &ugrid,
                      const StageTable &table, std::size_t horizon);
void write_metrics_csv(std::ostream &os, const SolveReport &report);
void write_report(std::ostream &os, const ProblemDef &p, const SolverConfig &cfg,
                  const SolveReport &report);
void write_trajectory_csv(std::ostream &os, const RolloutTrace &trace, std::size_t control_dim);
void write_compare_csv(std::ostream &os, const Comparison &cmp);
void write_sweep_csv(std::ostream &os, const ProblemDef &p, const std::vector<SweepRow> &rows);
void write_sweep_nodes_csv(std::ostream &os, const CartesianGrid &xgrid,
                           const std::vector<SweepRow> &rows);
void write_equilibrium_csv(std::ostream &os, const EquilibriumPoint &eq);

} // namespace ucpadp::cli
