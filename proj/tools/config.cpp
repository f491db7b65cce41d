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

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ucpadp::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(trim(item));
  return out;
}

template <class T> T parse_number(const std::string &key, const std::string &text) {
  T value{};
  const char *first = text.data();
  const char *last = text.data() + text.size();
  if (!text.empty() && text.front() == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty())
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  return value;
}

std::vector<double> parse_reals(const std::string &key, const std::string &v) {
  std::vector<double> out;
  for (const auto &item : split_list(v))
    out.push_back(parse_number<double>(key, item));
  return out;
}

std::vector<std::size_t> parse_counts(const std::string &key, const std::string &v) {
  std::vector<std::size_t> out;
  if (trim(v).empty())
    return out;
  for (const auto &item : split_list(v))
    out.push_back(parse_number<std::size_t>(key, item));
  return out;
}

struct AxisLists {
  std::vector<double> lo, hi, spacing;
  bool any() const { return !lo.empty() || !hi.empty() || !spacing.empty(); }
};

std::vector<AxisSpec> build_axes(const std::string &section, const AxisLists &l) {
  if (l.lo.size() != l.hi.size() || l.lo.size() != l.spacing.size() || l.lo.empty())
    throw ConfigError("config section '" + section +
                      "': lo, hi and spacing need the same non-zero length");
  std::vector<AxisSpec> axes;
  for (std::size_t i = 0; i < l.lo.size(); ++i) {
    AxisSpec a{l.lo[i], l.hi[i], l.spacing[i]};
    try {
      a.count();
    } catch (const UsageError &e) {
      throw ConfigError("config key '" + section + ".spacing' (axis " + std::to_string(i) +
                        "): " + e.what());
    }
    axes.push_back(a);
  }
  return axes;
}

} // namespace

const std::vector<std::string> &builtin_problems() {
  static const std::vector<std::string> names{"min_time_pendulum", "avg_angle_pendulum"};
  return names;
}

RunConfig parse_config(std::istream &in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string t = trim(line);
    if (t.empty())
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw ConfigError("config key '" + key + "' given twice");
    kv[key] = trim(std::string_view(t).substr(eq + 1));
  }

  RunConfig cfg;
  if (auto it = kv.find("problem.name"); it != kv.end())
    cfg.problem = it->second;
  const bool min_time = cfg.problem == "min_time_pendulum";
  const bool avg_angle = cfg.problem == "avg_angle_pendulum";
  if (!min_time && !avg_angle)
    throw ConfigError("config key 'problem.name': unknown problem '" + cfg.problem + "'");

  if (avg_angle) {
    cfg.pendulum.damping = 1.0;
    cfg.state_axes = {{-1.0, 1.0, 0.02}, {-1.0, 1.0, 0.02}};
  } else {
    cfg.state_axes = {{-2.0, 3.5, 0.05}, {-1.5, 2.0, 0.05}};
  }
  cfg.control_axes = {{-1.0, 1.0, 0.01}};
  cfg.x0 = {0.0, 0.0};

  AxisLists state, control;
  using Setter = std::function<void(const std::string &, const std::string &)>;
  const std::map<std::string, Setter> setters{
      {"problem.name", [](auto &, auto &) {}},
      {"problem.theta_ref",
       [&](auto &k, auto &v) { cfg.theta_ref = parse_number<double>(k, v); }},
      {"pendulum.mass", [&](auto &k, auto &v) { cfg.pendulum.mass = parse_number<double>(k, v); }},
      {"pendulum.gravity",
       [&](auto &k, auto &v) { cfg.pendulum.gravity = parse_number<double>(k, v); }},
      {"pendulum.length",
       [&](auto &k, auto &v) { cfg.pendulum.length = parse_number<double>(k, v); }},
      {"pendulum.damping",
       [&](auto &k, auto &v) { cfg.pendulum.damping = parse_number<double>(k, v); }},
      {"pendulum.sample_time",
       [&](auto &k, auto &v) { cfg.pendulum.sample_time = parse_number<double>(k, v); }},
      {"pendulum.substeps",
       [&](auto &k, auto &v) { cfg.pendulum.substeps = parse_number<int>(k, v); }},
      {"state.lo", [&](auto &k, auto &v) { state.lo = parse_reals(k, v); }},
      {"state.hi", [&](auto &k, auto &v) { state.hi = parse_reals(k, v); }},
      {"state.spacing", [&](auto &k, auto &v) { state.spacing = parse_reals(k, v); }},
      {"control.lo", [&](auto &k, auto &v) { control.lo = parse_reals(k, v); }},
      {"control.hi", [&](auto &k, auto &v) { control.hi = parse_reals(k, v); }},
      {"control.spacing", [&](auto &k, auto &v) { control.spacing = parse_reals(k, v); }},
      {"solver.eps_mu", [&](auto &k, auto &v) { cfg.solver.eps_mu = parse_reals(k, v); }},
      {"solver.eps_x", [&](auto &k, auto &v) { cfg.solver.eps_x = parse_reals(k, v); }},
      {"solver.n_init",
       [&](auto &k, auto &v) { cfg.solver.n_init = parse_number<std::size_t>(k, v); }},
      {"solver.n_max",
       [&](auto &k, auto &v) { cfg.solver.n_max = parse_number<std::size_t>(k, v); }},
      {"solver.growth",
       [&](auto &k, auto &v) { cfg.solver.growth = parse_number<std::size_t>(k, v); }},
      {"solver.threads",
       [&](auto &k, auto &v) { cfg.solver.threads = parse_number<unsigned>(k, v); }},
      {"reference.multiplier",
       [&](auto &k, auto &v) { cfg.reference_multiplier = parse_number<std::size_t>(k, v); }},
      {"rollout.x0", [&](auto &k, auto &v) { cfg.x0 = parse_reals(k, v); }},
      {"rollout.horizon",
       [&](auto &k, auto &v) { cfg.rollout_horizon = parse_number<std::size_t>(k, v); }},
      {"sweep.horizons", [&](auto &k, auto &v) { cfg.sweep_horizons = parse_counts(k, v); }},
      {"sweep.trajectory_horizon",
       [&](auto &k, auto &v) { cfg.trajectory_horizon = parse_number<std::size_t>(k, v); }},
      {"equilibrium.tolerance",
       [&](auto &k, auto &v) { cfg.equilibrium_tolerance = parse_number<double>(k, v); }},
      {"output.dir", [&](auto &, auto &v) { cfg.output_dir = v; }},
      {"seed", [&](auto &k, auto &v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
  };
  for (const auto &[key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("config key '" + key + "' is not recognised");
    it->second(key, value);
  }

  if (state.any())
    cfg.state_axes = build_axes("state", state);
  if (control.any())
    cfg.control_axes = build_axes("control", control);
  if (cfg.state_axes.size() != 2 || cfg.control_axes.size() != 1)
    throw ConfigError("config: pendulum problems need two state axes and one control axis");
  try {
    cfg.pendulum.validate();
  } catch (const UsageError &e) {
    throw ConfigError(std::string("config section 'pendulum': ") + e.what());
  }
  if (avg_angle && !(std::abs(cfg.theta_ref) < 1.0))
    throw ConfigError("config key 'problem.theta_ref': must satisfy |theta_ref| < 1");
  if (cfg.x0.size() != cfg.state_axes.size())
    throw ConfigError("config key 'rollout.x0': needs one entry per state axis");
  if (cfg.equilibrium_tolerance && !(*cfg.equilibrium_tolerance > 0.0))
    throw ConfigError("config key 'equilibrium.tolerance': must be positive");
  if (cfg.reference_multiplier < 1)
    throw ConfigError("config key 'reference.multiplier': must be at least 1");
  try {
    SolverConfig probe = cfg.solver;
    probe.resolve(make_state_grid(cfg), make_control_grid(cfg));
  } catch (const ConfigError &) {
    throw;
  } catch (const UsageError &e) {
    throw ConfigError(std::string("config section 'solver': ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config file '" + path.string() + "'");
  return parse_config(in);
}

ProblemDef make_problem(const RunConfig &cfg) {
  if (cfg.problem == "avg_angle_pendulum")
    return builtin_avg_angle_pendulum(cfg.theta_ref, cfg.pendulum);
  if (cfg.problem == "min_time_pendulum")
    return builtin_min_time_pendulum({cfg.state_axes[0].spacing, cfg.state_axes[1].spacing},
                                     cfg.pendulum);
  throw ConfigError("unknown problem '" + cfg.problem + "'");
}

CartesianGrid make_state_grid(const RunConfig &cfg) { return CartesianGrid(cfg.state_axes); }

CartesianGrid make_control_grid(const RunConfig &cfg) {
  return CartesianGrid(cfg.control_axes);
}

} // namespace ucpadp::cli
