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

#include "ucpadp/solver.hpp"

#include "ucpadp/rollout.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

namespace ucpadp {

namespace {

void print_vec(std::ostream &os, const Vec &v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? "," : "") << v[i];
  os << ']';
}

std::size_t ceil_half(std::size_t n) { return (n + 1) / 2; }

} // namespace

const char *to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::converged:
    return "converged";
  case SolveStatus::hit_n_max:
    return "hit_n_max";
  }
  return "unknown";
}

void SolverConfig::resolve(const CartesianGrid &xgrid, const CartesianGrid &ugrid) {
  if (eps_mu.empty())
    for (const auto &a : ugrid.axes())
      eps_mu.push_back(2.0 * a.spacing);
  if (eps_x.empty())
    for (const auto &a : xgrid.axes())
      eps_x.push_back(2.0 * a.spacing);
  if (eps_mu.size() != ugrid.dims())
    throw UsageError("eps_mu needs one entry per control axis");
  if (eps_x.size() != xgrid.dims())
    throw UsageError("eps_x needs one entry per state axis");
  for (double e : eps_mu)
    if (!(e > 0.0))
      throw UsageError("eps_mu entries must be positive");
  for (double e : eps_x)
    if (!(e > 0.0))
      throw UsageError("eps_x entries must be positive");
  if (n_init < 1)
    throw UsageError("n_init must be at least 1");
  if (n_max < n_init)
    throw UsageError("n_max must be at least n_init");
  if (growth < 2)
    throw UsageError("growth must be at least 2");
}

bool within(std::span<const double> delta, std::span<const double> eps) {
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (!(delta[i] < eps[i]))
      return false;
  return true;
}

Vec delta_mu(std::span<const StageTable> stages, std::span<const std::size_t> survivors,
             const CartesianGrid &ugrid) {
  if (stages.empty())
    throw SolverError("policy deviation needs at least one stage");
  if (survivors.empty())
    throw SolverError("no feasible initial conditions");
  const std::size_t n = stages.size();
  const std::size_t m = ugrid.dims();
  const StageTable &first = stages.back();
  Vec dev(m, 0.0);
  Vec ua(m), ub(m);
  for (std::size_t x : survivors) {
    if (first.policy[x] == kNoControl)
      throw SolverError("survivor node is infeasible under the first-stage policy");
    ugrid.node_coord(first.policy[x], ua);
    // Back-calculation index j maps to stack slot j - 1.
    for (std::size_t j = ceil_half(n); j <= n; ++j) {
      const std::uint32_t idx = stages[j - 1].policy[x];
      if (idx == kNoControl) {
        std::fill(dev.begin(), dev.end(), kInf);
        return dev;
      }
      ugrid.node_coord(idx, ub);
      for (std::size_t i = 0; i < m; ++i)
        dev[i] = std::max(dev[i], std::abs(ua[i] - ub[i]));
    }
  }
  return dev;
}

Vec feasible_mean(const ForwardEnsemble &ens) {
  Vec mean(ens.state_dim, 0.0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    if (!ens.feasible[i])
      continue;
    const auto s = ens.state(i);
    for (std::size_t d = 0; d < ens.state_dim; ++d)
      mean[d] += s[d];
    ++count;
  }
  if (count == 0)
    throw SolverError("no feasible initial conditions");
  for (double &v : mean)
    v /= static_cast<double>(count);
  return mean;
}

Vec delta_x(const ForwardEnsemble &ens) {
  const Vec mean = feasible_mean(ens);
  Vec dev(ens.state_dim, 0.0);
  for (std::size_t i = 0; i < ens.size(); ++i) {
    if (!ens.feasible[i])
      continue;
    const auto s = ens.state(i);
    for (std::size_t d = 0; d < ens.state_dim; ++d)
      dev[d] = std::max(dev[d], std::abs(s[d] - mean[d]));
  }
  return dev;
}

SolveReport solve(const ProblemDef &p, const CartesianGrid &xgrid, const CartesianGrid &ugrid,
                  SolverConfig cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.resolve(xgrid, ugrid);
  BackwardRecursion rec(p, xgrid, ugrid, cfg.threads);
  SolveReport report;

  std::size_t target = cfg.n_init;
  for (;;) {
    rec.extend_to(target);
    const std::size_t horizon = rec.horizon();
    const StageTable &first = rec.first_stage();

    ConvergenceMetrics met;
    met.horizon = horizon;
    met.seeded_count = first.feasible_count();
    if (met.seeded_count == 0)
      throw SolverError("infeasible problem: no feasible initial node at horizon " +
                        std::to_string(horizon));

    ForwardEnsemble ens = seed_ensemble(xgrid, first);
    for (std::size_t k = 0; k < ceil_half(horizon); ++k)
      ens = forward_step(p, xgrid, ugrid, first, ens, cfg.threads);
    const auto survivors = feasible_indices(ens);
    met.feasible_count = survivors.size();
    if (survivors.empty())
      throw SolverError("no feasible initial conditions survive " +
                        std::to_string(ceil_half(horizon)) + " closed-loop steps at horizon " +
                        std::to_string(horizon));
    met.delta_mu = delta_mu(rec.stages(), survivors, ugrid);
    met.delta_x = delta_x(ens);
    met.passed = within(met.delta_mu, cfg.eps_mu) && within(met.delta_x, cfg.eps_x);

    if (cfg.progress) {
      auto &os = *cfg.progress;
      os << "horizon=" << horizon << " delta_mu=";
      print_vec(os, met.delta_mu);
      os << " delta_x=";
      print_vec(os, met.delta_x);
      os << " seeded=" << met.seeded_count << " feasible=" << met.feasible_count
         << " pass=" << (met.passed ? 1 : 0) << '\n';
      os.flush();
    }

    report.metrics.push_back(met);
    report.terminal_horizon = horizon;
    report.final_ensemble = std::move(ens);
    if (met.passed) {
      report.status = SolveStatus::converged;
      break;
    }
    if (horizon * cfg.growth > cfg.n_max) {
      report.status = SolveStatus::hit_n_max;
      break;
    }
    target = horizon * cfg.growth;
  }

  report.first_stage_policy = rec.first_stage();
  report.terminal_mean = feasible_mean(report.final_ensemble);
  const std::size_t n = report.terminal_horizon;
  try {
    report.achieved_average = achieved_average(p, xgrid, ugrid, report.first_stage_policy,
                                               report.terminal_mean, 10 * n, (n + 3) / 4);
  } catch (const RolloutError &) {
    report.achieved_average.reset();
  } catch (const SolverError &) {
    report.achieved_average.reset();
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

double achieved_average(const ProblemDef &p, const CartesianGrid &xgrid,
                        const CartesianGrid &ugrid, const StageTable &policy,
                        std::span<const double> x0, std::size_t horizon, std::size_t tail) {
  if (tail > horizon || tail == 0)
    throw UsageError("tail must lie in [1, horizon]");
  const RolloutTrace trace = rollout_stationary(p, xgrid, ugrid, policy, x0, horizon);
  if (trace.steps() < horizon)
    throw RolloutError(trace.steps(), *trace.truncation);
  return trace.mean_average_value(horizon - tail);
}

} // namespace ucpadp
