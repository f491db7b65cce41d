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

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucpadp {

class RolloutError : public std::runtime_error {
public:
  RolloutError(std::size_t step, const std::string &what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

/// Closed-loop trajectory. states has one more entry than the per-step
/// vectors; a truncated trace records why it stopped.
struct RolloutTrace {
  std::vector<Vec> states;
  std::vector<Vec> controls;
  Vec stage_cost;
  Vec relaxed_cost;
  Vec average_value;
  std::optional<std::string> truncation;

  std::size_t steps() const { return controls.size(); }
  double mean_stage_cost(std::size_t first = 0) const;
  double mean_relaxed_cost(std::size_t first = 0) const;
  double mean_average_value(std::size_t first = 0) const;
  /// Sum of squared control components over all steps.
  double control_energy() const;
};

/// Applies the same policy at every step for up to `horizon` steps.
/// Throws RolloutError if x0 itself cannot be controlled.
RolloutTrace rollout_stationary(const ProblemDef &p, const CartesianGrid &xgrid,
                                const CartesianGrid &ugrid, const StageTable &policy,
                                std::span<const double> x0, std::size_t horizon);

/// Applies policies[k] at step k (forward-time order).
RolloutTrace rollout_time_varying(const ProblemDef &p, const CartesianGrid &xgrid,
                                  const CartesianGrid &ugrid,
                                  std::span<const StageTable> policies,
                                  std::span<const double> x0);

} // namespace ucpadp
