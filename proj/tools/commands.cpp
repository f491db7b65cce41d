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

#include "commands.hpp"

#include "config.hpp"
#include "io.hpp"

#include "ucpadp/equilibrium.hpp"
#include "ucpadp/reference.hpp"
#include "ucpadp/rollout.hpp"
#include "ucpadp/solver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>

namespace ucpadp::cli {

namespace {

struct Options {
  std::string config;
  std::string out_dir;
  std::optional<unsigned> threads;
  std::vector<double> x0;
  std::optional<std::size_t> horizon;
  std::vector<std::size_t> horizons;
  bool horizons_given = false;
};

struct Context {
  RunConfig cfg;
  ProblemDef problem;
  CartesianGrid xgrid;
  CartesianGrid ugrid;
  std::filesystem::path out;
};

Context prepare(const Options &opt, std::ostream &err) {
  Context ctx;
  ctx.cfg = load_config(opt.config);
  if (!opt.out_dir.empty())
    ctx.cfg.output_dir = opt.out_dir;
  if (opt.threads)
    ctx.cfg.solver.threads = *opt.threads;
  if (!opt.x0.empty()) {
    if (opt.x0.size() != ctx.cfg.state_axes.size())
      throw ConfigError("--x0 needs one entry per state axis");
    ctx.cfg.x0 = opt.x0;
  }
  if (opt.horizon)
    ctx.cfg.rollout_horizon = *opt.horizon;
  if (opt.horizons_given)
    ctx.cfg.sweep_horizons = opt.horizons;
  ctx.problem = make_problem(ctx.cfg);
  ctx.xgrid = make_state_grid(ctx.cfg);
  ctx.ugrid = make_control_grid(ctx.cfg);
  ctx.cfg.solver.resolve(ctx.xgrid, ctx.ugrid);
  ctx.cfg.solver.progress = &err;
  ctx.out = ctx.cfg.output_dir;
  std::filesystem::create_directories(ctx.out);
  return ctx;
}

std::ofstream open_output(const std::filesystem::path &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw ConfigError("cannot write '" + path.string() + "'");
  return os;
}

int status_code(const SolveReport &r) {
  return r.status == SolveStatus::converged ? kConverged : kHitNMax;
}

void write_solve_artifacts(const Context &ctx, const SolveReport &r) {
  auto policy = open_output(ctx.out / "policy.csv");
  write_policy_csv(policy, ctx.xgrid, ctx.ugrid, r.first_stage_policy, r.terminal_horizon);
  auto metrics = open_output(ctx.out / "metrics.csv");
  write_metrics_csv(metrics, r);
  auto report = open_output(ctx.out / "report.txt");
  write_report(report, ctx.problem, ctx.cfg.solver, r);
}

int cmd_solve(const Options &opt, std::ostream &, std::ostream &err) {
  const Context ctx = prepare(opt, err);
  const SolveReport r = solve(ctx.problem, ctx.xgrid, ctx.ugrid, ctx.cfg.solver);
  write_solve_artifacts(ctx, r);
  err << "status " << to_string(r.status) << ", terminal horizon " << r.terminal_horizon << '\n';
  return status_code(r);
}

int cmd_rollout(const Options &opt, std::ostream &, std::ostream &err) {
  const Context ctx = prepare(opt, err);
  const SolveReport r = solve(ctx.problem, ctx.xgrid, ctx.ugrid, ctx.cfg.solver);
  write_solve_artifacts(ctx, r);
  RolloutTrace trace;
  try {
    trace = rollout_stationary(ctx.problem, ctx.xgrid, ctx.ugrid, r.first_stage_policy,
                               ctx.cfg.x0, ctx.cfg.rollout_horizon);
  } catch (const RolloutError &e) {
    err << "error: infeasible initial state: " << e.what() << '\n';
    return kInfeasibleRollout;
  }
  auto os = open_output(ctx.out / "trajectory.csv");
  write_trajectory_csv(os, trace, ctx.ugrid.dims());
  if (trace.truncation) {
    err << "error: rollout stopped after " << trace.steps() << " steps: " << *trace.truncation
        << '\n';
    return kInfeasibleRollout;
  }
  return status_code(r);
}

int cmd_compare(const Options &opt, std::ostream &, std::ostream &err) {
  const Context ctx = prepare(opt, err);
  Comparison cmp;
  try {
    cmp = compare_with_reference(ctx.problem, ctx.xgrid, ctx.ugrid, ctx.cfg.solver,
                                 ctx.cfg.reference_multiplier, ctx.cfg.x0);
  } catch (const RolloutError &e) {
    err << "error: infeasible initial state: " << e.what() << '\n';
    return kInfeasibleRollout;
  }
  write_solve_artifacts(ctx, cmp.solve);
  auto os = open_output(ctx.out / "compare.csv");
  write_compare_csv(os, cmp);
  auto tu = open_output(ctx.out / "trajectory_ucpadp.csv");
  write_trajectory_csv(tu, cmp.ucpadp, ctx.ugrid.dims());
  auto tr = open_output(ctx.out / "trajectory_reference.csv");
  write_trajectory_csv(tr, cmp.reference, ctx.ugrid.dims());
  err << "average cost ucpadp " << format_real(cmp.ucpadp_cost()) << " reference "
      << format_real(cmp.reference_cost()) << " deviation " << format_real(cmp.cost_deviation())
      << '\n';
  return status_code(cmp.solve);
}

int cmd_sweep(const Options &opt, std::ostream &, std::ostream &err) {
  const Context ctx = prepare(opt, err);
  if (ctx.cfg.sweep_horizons.empty())
    throw ConfigError("sweep needs a non-empty horizon list (sweep.horizons or --horizons)");
  const auto rows = horizon_sweep(ctx.problem, ctx.xgrid, ctx.ugrid, ctx.cfg.sweep_horizons,
                                  ctx.cfg.trajectory_horizon, ctx.cfg.solver.threads);
  auto os = open_output(ctx.out / "sweep.csv");
  write_sweep_csv(os, ctx.problem, rows);
  auto nodes = open_output(ctx.out / "sweep_nodes.csv");
  write_sweep_nodes_csv(nodes, ctx.xgrid, rows);
  return kConverged;
}

int cmd_equilibrium(const Options &opt, std::ostream &out, std::ostream &err) {
  const Context ctx = prepare(opt, err);
  const double tol =
      ctx.cfg.equilibrium_tolerance.value_or(default_equilibrium_tolerance(ctx.xgrid));
  const EquilibriumPoint eq =
      equilibrium_search(ctx.problem, ctx.xgrid, ctx.ugrid, tol, ctx.cfg.solver.threads);
  write_equilibrium_csv(out, eq);
  auto os = open_output(ctx.out / "equilibrium.csv");
  write_equilibrium_csv(os, eq);
  return kConverged;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Undiscounted control policy generation by approximate dynamic programming"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", opt.config, "Run configuration file")->required();
    sub->add_option("--out", opt.out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--threads", opt.threads, "Worker threads, 0 = auto");
  };
  auto *solve_cmd = app.add_subcommand("solve", "Compute the stationary policy");
  auto *rollout_cmd = app.add_subcommand("rollout", "Simulate the closed loop from one state");
  auto *compare_cmd =
      app.add_subcommand("compare", "Compare against the explicit long-horizon solution");
  auto *sweep_cmd = app.add_subcommand("sweep", "Closed-loop cost versus problem horizon");
  auto *eq_cmd = app.add_subcommand("equilibrium", "Cheapest gridded equilibrium");
  for (auto *sub : {solve_cmd, rollout_cmd, compare_cmd, sweep_cmd, eq_cmd})
    add_common(sub);
  for (auto *sub : {rollout_cmd, compare_cmd})
    sub->add_option("--x0", opt.x0, "Initial state")->delimiter(',');
  rollout_cmd->add_option("--horizon", opt.horizon, "Closed-loop steps");
  sweep_cmd->add_option("--horizons", opt.horizons, "Problem horizons")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kConverged;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  opt.horizons_given = sweep_cmd->count("--horizons") > 0;

  try {
    if (*solve_cmd)
      return cmd_solve(opt, out, err);
    if (*rollout_cmd)
      return cmd_rollout(opt, out, err);
    if (*compare_cmd)
      return cmd_compare(opt, out, err);
    if (*sweep_cmd)
      return cmd_sweep(opt, out, err);
    return cmd_equilibrium(opt, out, err);
  } catch (const RolloutError &e) {
    err << "error: " << e.what() << '\n';
    return kInfeasibleRollout;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

} // namespace ucpadp::cli
