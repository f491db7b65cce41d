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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ucpadp::cli {
namespace {

namespace fs = std::filesystem;

RunConfig parse(const std::string &text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_error(const std::string &text) {
  try {
    parse(text);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliRun : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ucpadp_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string &text) {
    const fs::path p = dir_ / "run.cfg";
    std::ofstream(p) << text;
    return p;
  }

  int run_cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  static std::string coarse_min_time() {
    return "problem.name = min_time_pendulum\n"
           "state.lo = -2, -1.5\nstate.hi = 3.5, 2\nstate.spacing = 0.1, 0.1\n"
           "control.lo = -1\ncontrol.hi = 1\ncontrol.spacing = 0.04\n";
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST(FormatReal, RoundTripsAndNamesNonFinite) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 3.0, 123456789.125}) {
    const std::string s = format_real(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(kInf), "inf");
  EXPECT_EQ(format_real(-kInf), "-inf");
  EXPECT_EQ(format_real(std::nan("")), "nan");
}

TEST(Config, DefaultsPerProblem) {
  const RunConfig mt = parse("problem.name = min_time_pendulum\n");
  ASSERT_EQ(mt.state_axes.size(), 2u);
  EXPECT_EQ(mt.state_axes[0].lo, -2.0);
  EXPECT_EQ(mt.state_axes[1].hi, 2.0);
  EXPECT_EQ(mt.state_axes[0].spacing, 0.05);
  EXPECT_EQ(mt.pendulum.damping, 0.0);
  EXPECT_EQ(mt.reference_multiplier, 10u);

  const RunConfig aa = parse("problem.name = avg_angle_pendulum\nproblem.theta_ref = 0.3\n");
  EXPECT_EQ(aa.pendulum.damping, 1.0);
  EXPECT_EQ(aa.theta_ref, 0.3);
  EXPECT_EQ(aa.state_axes[0].spacing, 0.02);
  EXPECT_NEAR(make_problem(aa).lambda, -std::sin(0.6), 1e-15);
}

TEST(Config, ParsesListsAndComments) {
  const RunConfig c = parse("# comment\nproblem.name = min_time_pendulum  # trailing\n"
                            "solver.eps_x = 0.3, 0.4\nsolver.n_init = 3\n"
                            "sweep.horizons = 5,10 , 20\nrollout.x0 = 0.5, -0.25\n"
                            "equilibrium.tolerance = 0.01\n");
  EXPECT_EQ(c.solver.eps_x, (Vec{0.3, 0.4}));
  EXPECT_EQ(c.solver.n_init, 3u);
  EXPECT_EQ(c.sweep_horizons, (std::vector<std::size_t>{5, 10, 20}));
  EXPECT_EQ(c.x0, (Vec{0.5, -0.25}));
  ASSERT_TRUE(c.equilibrium_tolerance);
  EXPECT_EQ(*c.equilibrium_tolerance, 0.01);
}

TEST(Config, DiagnosticsNameTheKey) {
  EXPECT_NE(config_error("problem.name = min_time_pendulum\nstate.spacing = -0.1, 0.05\n")
                .find("state"),
            std::string::npos);
  EXPECT_NE(config_error("problem.name = min_time_pendulum\nsolver.eps_mu = abc\n")
                .find("solver.eps_mu"),
            std::string::npos);
  EXPECT_NE(config_error("problem.name = min_time_pendulum\nbogus.key = 1\n").find("bogus.key"),
            std::string::npos);
  EXPECT_NE(config_error("problem.name = min_time_pendulum\nseed = 1\nseed = 2\n").find("seed"),
            std::string::npos);
  EXPECT_NE(config_error("problem.name = cartpole\n").find("problem.name"), std::string::npos);
  EXPECT_NE(config_error("problem.name = avg_angle_pendulum\nproblem.theta_ref = 1.2\n")
                .find("theta_ref"),
            std::string::npos);
  EXPECT_NE(config_error("problem.name = min_time_pendulum\nsolver.n_init = 8\nsolver.n_max = 4\n")
                .find("n_max"),
            std::string::npos);
  EXPECT_FALSE(config_error("just some words\n").empty());
}

TEST(Io, PolicyCsvRowsAreRowMajor) {
  CartesianGrid xg({{0, 1, 1}, {0, 1, 1}}), ug({{-1, 1, 1}});
  StageTable t;
  t.cost_to_go = {2.0, kInf, 4.0, 1.0};
  t.policy = {0, kNoControl, 2, 1};
  std::ostringstream os;
  write_policy_csv(os, xg, ug, t, 2);
  EXPECT_EQ(os.str(), "x_0,x_1,u_0,feasible,cost_avg\n"
                      "0,0,-1,1,1\n"
                      "0,1,inf,0,inf\n"
                      "1,0,1,1,2\n"
                      "1,1,0,1,0.5\n");
}

TEST(Io, TrajectoryCsvPadsFinalState) {
  RolloutTrace t;
  t.states = {{0.0, 0.0}, {0.5, 0.25}};
  t.controls = {{1.0}};
  t.stage_cost = {1.0};
  t.relaxed_cost = {1.0};
  t.average_value = {0.0};
  std::ostringstream os;
  write_trajectory_csv(os, t, 1);
  EXPECT_EQ(os.str(), "k,x_0,x_1,u_0,f_c,f_cR,f_a\n0,0,0,1,1,1,0\n1,0.5,0.25,,,,\n");
}

TEST_F(CliRun, SolveCoarseMinTimeWritesArtifacts) {
  const auto cfg = write_config(coarse_min_time());
  EXPECT_EQ(run_cli({"solve", "--config", cfg.string(), "--out", dir_.string()}), kConverged)
      << err_.str();
  const std::string report = slurp(dir_ / "report.txt");
  EXPECT_NE(report.find("status: converged"), std::string::npos);
  EXPECT_NE(report.find("terminal_horizon: 135"), std::string::npos);
  EXPECT_NE(report.find("tested_horizons: 5,15,45,135"), std::string::npos);
  EXPECT_NE(err_.str().find("horizon=135 "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "policy.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "metrics.csv"));
}

TEST_F(CliRun, HorizonCapGivesExitTwo) {
  const auto cfg = write_config(coarse_min_time() + "solver.n_init = 2\nsolver.n_max = 4\n");
  EXPECT_EQ(run_cli({"solve", "--config", cfg.string(), "--out", dir_.string()}), kHitNMax);
  EXPECT_NE(slurp(dir_ / "report.txt").find("status: hit_n_max"), std::string::npos);
}

TEST_F(CliRun, UsageErrorsGiveExitOne) {
  const auto bad = write_config("problem.name = min_time_pendulum\nstate.spacing = -0.05, 0.05\n");
  EXPECT_EQ(run_cli({"solve", "--config", bad.string(), "--out", dir_.string()}), kUsageError);
  EXPECT_NE(err_.str().find("state"), std::string::npos);
  EXPECT_EQ(run_cli({"solve", "--config", (dir_ / "missing.cfg").string()}), kUsageError);
  EXPECT_EQ(run_cli({"solve"}), kUsageError);
  EXPECT_EQ(run_cli({"launch", "--config", bad.string()}), kUsageError);
  EXPECT_EQ(run_cli({}), kUsageError);

  const auto cfg = write_config(coarse_min_time());
  EXPECT_EQ(run_cli({"sweep", "--config", cfg.string(), "--out", dir_.string()}), kUsageError);
  EXPECT_NE(err_.str().find("horizon"), std::string::npos);
  EXPECT_EQ(run_cli({"rollout", "--config", cfg.string(), "--x0", "1,2,3"}), kUsageError);
}

TEST_F(CliRun, RolloutFromInfeasibleStateGivesExitThree) {
  const auto cfg = write_config(coarse_min_time());
  EXPECT_EQ(run_cli({"rollout", "--config", cfg.string(), "--out", dir_.string(), "--x0",
                     "-1.9,-1.4"}),
            kInfeasibleRollout);
  EXPECT_NE(err_.str().find("step 0"), std::string::npos);
}

TEST_F(CliRun, RolloutZeroHorizonWritesSingleRow) {
  const auto cfg = write_config(coarse_min_time());
  EXPECT_EQ(run_cli({"rollout", "--config", cfg.string(), "--out", dir_.string(), "--horizon",
                     "0"}),
            kConverged);
  EXPECT_EQ(slurp(dir_ / "trajectory.csv"), "k,x_0,x_1,u_0,f_c,f_cR,f_a\n0,0,0,,,,\n");
}

TEST_F(CliRun, RolloutReachesInvertedPosition) {
  const auto cfg = write_config(coarse_min_time());
  ASSERT_EQ(run_cli({"rollout", "--config", cfg.string(), "--out", dir_.string(), "--horizon",
                     "200"}),
            kConverged);
  std::istringstream rows(slurp(dir_ / "trajectory.csv"));
  std::string line;
  std::getline(rows, line);
  int count = 0, inside_from = -1;
  while (std::getline(rows, line)) {
    double k, th, om;
    char c;
    std::istringstream f(line);
    f >> k >> c >> th >> c >> om;
    const bool inside = std::abs(th - M_PI) < 0.1 && std::abs(om) < 0.1;
    if (inside && inside_from < 0)
      inside_from = count;
    if (inside_from >= 0)
      EXPECT_TRUE(inside) << line;
    ++count;
  }
  EXPECT_EQ(count, 201);
  EXPECT_GE(inside_from, 0);
}

TEST_F(CliRun, EquilibriumPrintsOneRow) {
  const auto cfg = write_config(coarse_min_time());
  EXPECT_EQ(run_cli({"equilibrium", "--config", cfg.string(), "--out", dir_.string()}),
            kConverged);
  EXPECT_EQ(out_.str().substr(0, out_.str().find('\n')), "x_0,x_1,u_0,cost,residual");
  EXPECT_EQ(out_.str(), slurp(dir_ / "equilibrium.csv"));
}

TEST_F(CliRun, SweepWritesSummaryAndNodes) {
  const auto cfg = write_config(coarse_min_time());
  EXPECT_EQ(run_cli({"sweep", "--config", cfg.string(), "--out", dir_.string(), "--horizons",
                     "5,45", "--threads", "2"}),
            kConverged)
      << err_.str();
  std::istringstream rows(slurp(dir_ / "sweep.csv"));
  std::string line;
  int n = 0;
  while (std::getline(rows, line))
    ++n;
  EXPECT_EQ(n, 3);
  EXPECT_TRUE(fs::exists(dir_ / "sweep_nodes.csv"));
}

TEST_F(CliRun, ThreadCountDoesNotChangeOutputs) {
  const auto cfg = write_config(coarse_min_time());
  const fs::path a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run_cli({"solve", "--config", cfg.string(), "--out", a.string(), "--threads", "1"}),
            kConverged);
  ASSERT_EQ(run_cli({"solve", "--config", cfg.string(), "--out", b.string(), "--threads", "3"}),
            kConverged);
  for (const char *f : {"policy.csv", "metrics.csv"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  const auto strip_time = [](std::string s) { return s.substr(0, s.find("wall_time_s:")); };
  EXPECT_EQ(strip_time(slurp(a / "report.txt")), strip_time(slurp(b / "report.txt")));
}

} // namespace
} // namespace ucpadp::cli
