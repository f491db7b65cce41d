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

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ucpadp {

using Vec = std::vector<double>;

using DynamicsFn = std::function<void(std::span<const double> x, std::span<const double> u,
                                      std::span<double> x_next)>;
using ScalarFn = std::function<double(std::span<const double> x, std::span<const double> u)>;
using ConstraintFn = std::function<void(std::span<const double> x, std::span<const double> u,
                                        std::span<double> g)>;

/// An average-constrained optimal control problem in relaxed form.
///
/// The average constraint is carried through `average_fn` and the relaxation
/// weight `lambda`; the solver only ever sees `relaxed_cost`. All callables
/// must be pure: the solver evaluates them concurrently.
struct ProblemDef {
  std::string name;
  std::size_t state_dim = 0;
  std::size_t control_dim = 0;
  std::size_t constraint_count = 0;

  DynamicsFn dynamics;
  ScalarFn stage_cost;
  /// Feasible iff every component is <= 0.
  ConstraintFn inequality;
  ScalarFn average_fn;

  double lambda = 0.0;
  std::optional<double> nominal_average;
  /// Physical duration of one stage. Only used to express costs integrated
  /// over the sampling interval in reports.
  double sample_time = 1.0;
};

double relaxed_cost(const ProblemDef &p, std::span<const double> x, std::span<const double> u);

/// True iff every inequality component is <= 0.
bool admissible(const ProblemDef &p, std::span<const double> x, std::span<const double> u);

Vec step(const ProblemDef &p, std::span<const double> x, std::span<const double> u);

/// Throws UsageError if the problem is missing callables or has bad sizes.
void validate(const ProblemDef &p);

struct PendulumParams {
  double mass = 1.0;
  double gravity = 1.0;
  double length = 1.0;
  double damping = 0.0;
  double sample_time = 0.2;
  int substeps = 10;

  void validate() const;
};

/// Angular acceleration of the damped pendulum under constant torque u.
inline double pendulum_accel(const PendulumParams &pp, double theta, double omega, double u) {
  return u / (pp.mass * pp.length * pp.length) - (pp.damping / pp.mass) * omega -
         (pp.gravity / pp.length) * std::sin(theta);
}

/// State (theta, theta_dot) after holding torque u for one sample time,
/// integrated with fixed-step classical RK4.
std::array<double, 2> pendulum_step(const PendulumParams &pp, std::array<double, 2> x, double u);

/// Minimum-time swing-up to the inverted position. `state_spacing` binds the
/// 2*d_x target box of the stage cost.
ProblemDef builtin_min_time_pendulum(std::array<double, 2> state_spacing = {0.05, 0.05},
                                     PendulumParams pp = {});

/// Relaxation weight placing the cheapest equilibrium of u^2 + lambda*theta at
/// theta_ref.
double avg_angle_lambda(const PendulumParams &pp, double theta_ref);

/// Minimum control power subject to an average pendulum angle of theta_ref,
/// relaxed with avg_angle_lambda. Requires |theta_ref| < 1.
ProblemDef builtin_avg_angle_pendulum(double theta_ref, PendulumParams pp = {1.0, 1.0, 1.0, 1.0,
                                                                             0.2, 10});

} // namespace ucpadp
