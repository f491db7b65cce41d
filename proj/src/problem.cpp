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

#include "ucpadp/problem.hpp"

#include "ucpadp/grid.hpp"

#include <cmath>
#include <numbers>

namespace ucpadp {

double relaxed_cost(const ProblemDef &p, std::span<const double> x, std::span<const double> u) {
  return p.stage_cost(x, u) + p.lambda * p.average_fn(x, u);
}

bool admissible(const ProblemDef &p, std::span<const double> x, std::span<const double> u) {
  if (p.constraint_count == 0)
    return true;
  double buf[16];
  std::vector<double> heap;
  std::span<double> g;
  if (p.constraint_count <= 16) {
    g = std::span<double>(buf, p.constraint_count);
  } else {
    heap.resize(p.constraint_count);
    g = heap;
  }
  p.inequality(x, u, g);
  for (double v : g)
    if (!(v <= 0.0))
      return false;
  return true;
}

Vec step(const ProblemDef &p, std::span<const double> x, std::span<const double> u) {
  Vec next(p.state_dim);
  p.dynamics(x, u, next);
  return next;
}

void validate(const ProblemDef &p) {
  if (p.state_dim == 0 || p.control_dim == 0)
    throw UsageError("problem '" + p.name + "' needs positive state and control dimensions");
  if (!p.dynamics || !p.stage_cost || !p.average_fn)
    throw UsageError("problem '" + p.name + "' is missing dynamics, stage or average function");
  if (p.constraint_count > 0 && !p.inequality)
    throw UsageError("problem '" + p.name + "' declares constraints but no inequality function");
  if (!std::isfinite(p.lambda))
    throw UsageError("problem '" + p.name + "' has non-finite lambda");
  if (!(p.sample_time > 0.0))
    throw UsageError("problem '" + p.name + "' needs a positive sample time");
}

void PendulumParams::validate() const {
  if (!(mass > 0.0 && gravity > 0.0 && length > 0.0))
    throw UsageError("pendulum mass, gravity and length must be positive");
  if (!(damping >= 0.0))
    throw UsageError("pendulum damping must be non-negative");
  if (!(sample_time > 0.0))
    throw UsageError("pendulum sample time must be positive");
  if (substeps < 1)
    throw UsageError("pendulum substep count must be at least 1");
}

std::array<double, 2> pendulum_step(const PendulumParams &pp, std::array<double, 2> x, double u) {
  const double h = pp.sample_time / pp.substeps;
  double th = x[0];
  double om = x[1];
  for (int s = 0; s < pp.substeps; ++s) {
    const double k1t = om;
    const double k1o = pendulum_accel(pp, th, om, u);
    const double k2t = om + 0.5 * h * k1o;
    const double k2o = pendulum_accel(pp, th + 0.5 * h * k1t, k2t, u);
    const double k3t = om + 0.5 * h * k2o;
    const double k3o = pendulum_accel(pp, th + 0.5 * h * k2t, k3t, u);
    const double k4t = om + h * k3o;
    const double k4o = pendulum_accel(pp, th + h * k3t, k4t, u);
    th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    om += h / 6.0 * (k1o + 2.0 * k2o + 2.0 * k3o + k4o);
  }
  return {th, om};
}

namespace {

DynamicsFn pendulum_dynamics(const PendulumParams &pp) {
  return [pp](std::span<const double> x, std::span<const double> u, std::span<double> next) {
    const auto r = pendulum_step(pp, {x[0], x[1]}, u[0]);
    next[0] = r[0];
    next[1] = r[1];
  };
}

} // namespace

ProblemDef builtin_min_time_pendulum(std::array<double, 2> state_spacing, PendulumParams pp) {
  pp.validate();
  if (!(state_spacing[0] > 0.0 && state_spacing[1] > 0.0))
    throw UsageError("min-time target box needs positive state spacing");
  ProblemDef p;
  p.name = "min_time_pendulum";
  p.state_dim = 2;
  p.control_dim = 1;
  p.constraint_count = 5;
  p.dynamics = pendulum_dynamics(pp);
  const double box_theta = 2.0 * state_spacing[0];
  const double box_omega = 2.0 * state_spacing[1];
  p.stage_cost = [box_theta, box_omega](std::span<const double> x, std::span<const double>) {
    const bool at_top = std::abs(x[0] - std::numbers::pi) < box_theta && std::abs(x[1]) < box_omega;
    return at_top ? 0.0 : 1.0;
  };
  p.inequality = [](std::span<const double> x, std::span<const double> u, std::span<double> g) {
    g[0] = std::abs(u[0]) - 1.0;
    g[1] = -2.0 - x[0];
    g[2] = x[0] - 3.5;
    g[3] = -1.5 - x[1];
    g[4] = x[1] - 2.0;
  };
  p.average_fn = [](std::span<const double>, std::span<const double>) { return 0.0; };
  p.lambda = 0.0;
  p.sample_time = pp.sample_time;
  return p;
}

double avg_angle_lambda(const PendulumParams &pp, double theta_ref) {
  const double mgl = pp.mass * pp.gravity * pp.length;
  return -2.0 * mgl * mgl * std::sin(theta_ref) * std::cos(theta_ref);
}

ProblemDef builtin_avg_angle_pendulum(double theta_ref, PendulumParams pp) {
  pp.validate();
  if (!(std::abs(theta_ref) < 1.0))
    throw UsageError("theta_ref must satisfy |theta_ref| < 1");
  ProblemDef p;
  p.name = "avg_angle_pendulum";
  p.state_dim = 2;
  p.control_dim = 1;
  p.constraint_count = 3;
  p.dynamics = pendulum_dynamics(pp);
  p.stage_cost = [](std::span<const double>, std::span<const double> u) { return u[0] * u[0]; };
  p.inequality = [](std::span<const double> x, std::span<const double> u, std::span<double> g) {
    g[0] = std::abs(u[0]) - 1.0;
    g[1] = std::abs(x[0]) - 1.0;
    g[2] = std::abs(x[1]) - 1.0;
  };
  p.average_fn = [](std::span<const double> x, std::span<const double>) { return x[0]; };
  p.lambda = avg_angle_lambda(pp, theta_ref);
  p.nominal_average = theta_ref;
  p.sample_time = pp.sample_time;
  return p;
}

} // namespace ucpadp
