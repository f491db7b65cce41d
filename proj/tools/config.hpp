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
#include "ucpadp/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ucpadp::cli {

class ConfigError : public UsageError {
public:
  using UsageError::UsageError;
};

/// Everything one run needs. Parsed from a flat `section.key = value` file;
/// list values are comma separated.
struct RunConfig {
  std::string problem = "min_time_pendulum";
  double theta_ref = 0.5;
  PendulumParams pendulum;
  std::vector<AxisSpec> state_axes;
  std::vector<AxisSpec> control_axes;
  SolverConfig solver;
  std::size_t reference_multiplier = 10;
  Vec x0;
  std::size_t rollout_horizon = 200;
  std::vector<std::size_t> sweep_horizons;
  std::size_t trajectory_horizon = 1350;
  /// Stationarity tolerance; defaults to the largest state spacing.
  std::optional<double> equilibrium_tolerance;
  std::filesystem::path output_dir = "out";
  /// Reserved; the pipeline is deterministic.
  std::uint64_t seed = 0;
};

/// Names of the builtin problems, in documentation order.
const std::vector<std::string> &builtin_problems();

RunConfig parse_config(std::istream &in);
RunConfig load_config(const std::filesystem::path &path);

ProblemDef make_problem(const RunConfig &cfg);
CartesianGrid make_state_grid(const RunConfig &cfg);
CartesianGrid make_control_grid(const RunConfig &cfg);

} // namespace ucpadp::cli
