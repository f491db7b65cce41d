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

#include "io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace ucpadp::cli {

std::string format_real(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

namespace {

void header_columns(std::ostream &os, const char *prefix, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i)
    os << ',' << prefix << i;
}

void join(std::ostream &os, const Vec &v, char sep = ',') {
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? std::string(1, sep) : "") << format_real(v[i]);
}

} // namespace

void write_policy_csv(std::ostream &os, const CartesianGrid &xgrid, const CartesianGrid &ugrid,
                      const StageTable &table, std::size_t horizon) {
  for (std::size_t i = 0; i < xgrid.dims(); ++i)
    os << (i ? "," : "") << "x_" << i;
  header_columns(os, "u_", ugrid.dims());
  os << ",feasible,cost_avg\n";
  Vec x(xgrid.dims()), u(ugrid.dims());
  for (std::size_t k = 0; k < xgrid.size(); ++k) {
    xgrid.node_coord(k, x);
    join(os, x);
    const bool ok = table.policy[k] != kNoControl;
    if (ok)
      ugrid.node_coord(table.policy[k], u);
    for (std::size_t i = 0; i < ugrid.dims(); ++i)
      os << ',' << (ok ? format_real(u[i]) : "inf");
    os << ',' << (ok ? 1 : 0) << ','
       << format_real(ok ? table.cost_to_go[k] / static_cast<double>(horizon) : kInf) << '\n';
  }
}

void write_metrics_csv(std::ostream &os, const SolveReport &report) {
  const std::size_t m = report.metrics.empty() ? 0 : report.metrics.front().delta_mu.size();
  const std::size_t n = report.metrics.empty() ? 0 : report.metrics.front().delta_x.size();
  os << "horizon";
  header_columns(os, "delta_mu_", m);
  header_columns(os, "delta_x_", n);
  os << ",seeded,feasible,passed\n";
  for (const auto &met : report.metrics) {
    os << met.horizon << ',';
    join(os, met.delta_mu);
    os << ',';
    join(os, met.delta_x);
    os << ',' << met.seeded_count << ',' << met.feasible_count << ',' << (met.passed ? 1 : 0)
       << '\n';
  }
}

void write_report(std::ostream &os, const ProblemDef &p, const SolverConfig &cfg,
                  const SolveReport &report) {
  os << "problem: " << p.name << '\n';
  os << "status: " << to_string(report.status) << '\n';
  os << "terminal_horizon: " << report.terminal_horizon << '\n';
  if (report.status == SolveStatus::converged && report.metrics.size() > 1)
    os << "minimum_horizon_bracket: (" << report.metrics[report.metrics.size() - 2].horizon << ", "
       << report.terminal_horizon << "]\n";
  os << "tested_horizons: ";
  for (std::size_t i = 0; i < report.metrics.size(); ++i)
    os << (i ? "," : "") << report.metrics[i].horizon;
  os << '\n';
  os << "eps_mu: ";
  join(os, cfg.eps_mu);
  os << "\neps_x: ";
  join(os, cfg.eps_x);
  os << "\nlambda: " << format_real(p.lambda) << '\n';
  if (p.nominal_average)
    os << "nominal_average: " << format_real(*p.nominal_average) << '\n';
  os << "achieved_average: "
     << (report.achieved_average ? format_real(*report.achieved_average) : "unavailable") << '\n';
  os << "terminal_mean: ";
  join(os, report.terminal_mean);
  os << "\nfeasible_initial_nodes: " << report.first_stage_policy.feasible_count() << '\n';
  os << "delta_mu_history: ";
  for (std::size_t i = 0; i < report.metrics.size(); ++i) {
    os << (i ? "; " : "") << report.metrics[i].horizon << ':';
    join(os, report.metrics[i].delta_mu, ' ');
  }
  os << "\ndelta_x_history: ";
  for (std::size_t i = 0; i < report.metrics.size(); ++i) {
    os << (i ? "; " : "") << report.metrics[i].horizon << ':';
    join(os, report.metrics[i].delta_x, ' ');
  }
  os << "\nwall_time_s: " << report.wall_time_s << '\n';
}

void write_trajectory_csv(std::ostream &os, const RolloutTrace &trace, std::size_t control_dim) {
  const std::size_t n = trace.states.front().size();
  const std::size_t m = control_dim;
  os << 'k';
  header_columns(os, "x_", n);
  header_columns(os, "u_", m);
  os << ",f_c,f_cR,f_a\n";
  for (std::size_t k = 0; k < trace.states.size(); ++k) {
    os << k << ',';
    join(os, trace.states[k]);
    if (k < trace.steps()) {
      os << ',';
      join(os, trace.controls[k]);
      os << ',' << format_real(trace.stage_cost[k]) << ',' << format_real(trace.relaxed_cost[k])
         << ',' << format_real(trace.average_value[k]);
    } else {
      os << std::string(m + 3, ',');
    }
    os << '\n';
  }
}

void write_compare_csv(std::ostream &os, const Comparison &cmp) {
  os << "method,problem_horizon,window,steps,average_cost,average_relaxed_cost,control_energy\n";
  const auto row = [&](const char *name, std::size_t horizon, const RolloutTrace &t) {
    os << name << ',' << horizon << ',' << cmp.reference_horizon << ',' << t.steps() << ','
       << format_real(t.mean_stage_cost()) << ',' << format_real(t.mean_relaxed_cost()) << ','
       << format_real(t.control_energy()) << '\n';
  };
  row("ucpadp", cmp.solve.terminal_horizon, cmp.ucpadp);
  row("reference", cmp.reference_horizon, cmp.reference);
  os << "relative_deviation,,,," << format_real(cmp.cost_deviation()) << ','
     << format_real(relative_deviation(cmp.ucpadp.mean_relaxed_cost(),
                                       cmp.reference.mean_relaxed_cost()))
     << ',' << format_real(cmp.control_energy_deviation()) << '\n';
}

void write_sweep_csv(std::ostream &os, const ProblemDef &p, const std::vector<SweepRow> &rows) {
  os << "horizon,min_cost,max_cost,mean_cost,feasible_count,min_cost_integrated,"
        "max_cost_integrated,mean_cost_integrated\n";
  for (const auto &r : rows) {
    os << r.problem_horizon << ',' << format_real(r.min_cost()) << ','
       << format_real(r.max_cost()) << ',' << format_real(r.mean_cost()) << ','
       << r.feasible_count() << ',' << format_real(r.min_cost() * p.sample_time) << ','
       << format_real(r.max_cost() * p.sample_time) << ','
       << format_real(r.mean_cost() * p.sample_time) << '\n';
  }
}

void write_sweep_nodes_csv(std::ostream &os, const CartesianGrid &xgrid,
                           const std::vector<SweepRow> &rows) {
  os << "horizon,node";
  header_columns(os, "x_", xgrid.dims());
  os << ",average_cost\n";
  Vec x(xgrid.dims());
  for (const auto &r : rows) {
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      xgrid.node_coord(r.nodes[i], x);
      os << r.problem_horizon << ',' << r.nodes[i] << ',';
      join(os, x);
      os << ',' << format_real(r.average_cost[i]) << '\n';
    }
  }
}

void write_equilibrium_csv(std::ostream &os, const EquilibriumPoint &eq) {
  for (std::size_t i = 0; i < eq.x_eq.size(); ++i)
    os << (i ? "," : "") << "x_" << i;
  header_columns(os, "u_", eq.u_eq.size());
  os << ",cost,residual\n";
  join(os, eq.x_eq);
  os << ',';
  join(os, eq.u_eq);
  os << ',' << format_real(eq.cost) << ',' << format_real(eq.residual) << '\n';
}

} // namespace ucpadp::cli
