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

#include "ucpadp/dp_core.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace ucpadp {
namespace {

ProblemDef scalar_problem(std::function<double(double, double)> f,
                          std::function<double(double, double)> cost,
                          std::function<double(double, double)> g) {
  ProblemDef p;
  p.name = "scalar";
  p.state_dim = 1;
  p.control_dim = 1;
  p.constraint_count = 1;
  p.dynamics = [f](std::span<const double> x, std::span<const double> u, std::span<double> out) {
    out[0] = f(x[0], u[0]);
  };
  p.stage_cost = [cost](std::span<const double> x, std::span<const double> u) {
    return cost(x[0], u[0]);
  };
  p.inequality = [g](std::span<const double> x, std::span<const double> u, std::span<double> out) {
    out[0] = g(x[0], u[0]);
  };
  p.average_fn = [](std::span<const double>, std::span<const double>) { return 0.0; };
  return p;
}

struct CoarsePendulum {
  CartesianGrid xgrid{{{-2.0, 3.5, 0.1}, {-1.5, 2.0, 0.1}}};
  CartesianGrid ugrid{{{-1.0, 1.0, 0.1}}};
  ProblemDef problem = builtin_min_time_pendulum({0.1, 0.1});
};

TEST(BackwardStep, ConstantCostTiesToFirstControl) {
  const auto p = scalar_problem([](double x, double) { return x; },
                                [](double, double) { return 0.5; },
                                [](double, double) { return -1.0; });
  CartesianGrid xg({{0, 1, 0.25}}), ug({{-1, 1, 0.5}});
  const StageTable t = backward_step(p, xg, ug, StageTable::terminal(xg));
  for (std::size_t k = 0; k < xg.size(); ++k) {
    EXPECT_EQ(t.cost_to_go[k], 0.5);
    EXPECT_EQ(t.policy[k], 0u);
  }
}

TEST(BackwardStep, HandWorkedToy) {
  const auto p = scalar_problem([](double, double u) { return u; },
                                [](double x, double u) { return x + 2 * u; },
                                [](double, double) { return -1.0; });
  CartesianGrid xg({{0, 1, 1}}), ug({{0, 1, 1}});
  const StageTable t = backward_step(p, xg, ug, StageTable::terminal(xg));
  EXPECT_EQ(t.cost_to_go, (NodeField{0.0, 1.0}));
  EXPECT_EQ(t.policy, (std::vector<std::uint32_t>{0, 0}));
}

TEST(BackwardStep, NodeWithoutAdmissibleControlIsInfeasible) {
  const auto p = scalar_problem([](double x, double) { return x; },
                                [](double, double) { return 1.0; },
                                [](double x, double) { return x > 0.5 ? 1.0 : -1.0; });
  CartesianGrid xg({{0, 1, 0.5}}), ug({{0, 1, 1}});
  const StageTable t = backward_step(p, xg, ug, StageTable::terminal(xg));
  EXPECT_EQ(t.cost_to_go[2], kInf);
  EXPECT_EQ(t.policy[2], kNoControl);
  EXPECT_TRUE(t.feasible(0));
  EXPECT_EQ(t.feasible_count(), 2u);
}

TEST(BackwardStep, SuccessorOutsideBoxIsInadmissible) {
  const auto p = scalar_problem([](double x, double u) { return x + u; },
                                [](double, double u) { return -u; },
                                [](double, double) { return -1.0; });
  CartesianGrid xg({{0, 2, 1}}), ug({{0, 1, 1}});
  const StageTable t = backward_step(p, xg, ug, StageTable::terminal(xg));
  EXPECT_EQ(t.policy, (std::vector<std::uint32_t>{1, 1, 0}));
  EXPECT_EQ(t.cost_to_go, (NodeField{-1.0, -1.0, 0.0}));
}

TEST(BellmanOracle, RandomInstancesMatchEnumeration) {
  std::mt19937_64 rng(20240611);
  for (int instance = 0; instance < 60; ++instance) {
    const auto toy = testing::make_toy_instance(rng);
    ASSERT_LE(toy.xgrid.size() * toy.ugrid.size(), 100u);
    const std::size_t horizon = 1 + instance % 6;
    EXPECT_EQ(testing::oracle_mismatches(toy, horizon), 0u)
        << "instance " << instance << " horizon " << horizon;
  }
}

TEST(DpCoreProperty, CachedAndDirectStepsAreBitIdentical) {
  CoarsePendulum c;
  TransitionTable tt(c.problem, c.xgrid, c.ugrid);
  StageTable cached = StageTable::terminal(c.xgrid), direct = cached;
  for (int k = 0; k < 6; ++k) {
    cached = backward_step(tt, cached);
    direct = backward_step(c.problem, c.xgrid, c.ugrid, direct);
    ASSERT_EQ(cached, direct) << k;
  }
}

TEST(DpCoreProperty, ThreadCountDoesNotChangeStages) {
  CoarsePendulum c;
  BackwardRecursion one(c.problem, c.xgrid, c.ugrid, 1);
  BackwardRecursion many(c.problem, c.xgrid, c.ugrid, 4);
  one.extend_to(8);
  many.extend_to(8);
  EXPECT_EQ(one.stages(), many.stages());

  ForwardEnsemble a = seed_ensemble(c.xgrid, one.first_stage()), b = a;
  for (int k = 0; k < 4; ++k) {
    a = forward_step(c.problem, c.xgrid, c.ugrid, one.first_stage(), a, 1);
    b = forward_step(c.problem, c.xgrid, c.ugrid, one.first_stage(), b, 3);
  }
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.feasible, b.feasible);
}

TEST(DpCoreProperty, ResumedRecursionMatchesSingleRun) {
  CoarsePendulum c;
  BackwardRecursion resumed(c.problem, c.xgrid, c.ugrid);
  resumed.extend_to(5);
  resumed.extend_to(15);
  BackwardRecursion single(c.problem, c.xgrid, c.ugrid);
  single.extend_to(15);
  ASSERT_EQ(resumed.horizon(), 15u);
  EXPECT_EQ(resumed.stages(), single.stages());
}

TEST(DpCoreProperty, InfeasibleSetGrowsWithHorizon) {
  CoarsePendulum c;
  BackwardRecursion rec(c.problem, c.xgrid, c.ugrid);
  rec.extend_to(25);
  const auto &st = rec.stages();
  for (std::size_t j = 1; j < st.size(); ++j)
    for (std::size_t k = 0; k < c.xgrid.size(); ++k)
      if (!st[j - 1].feasible(k))
        ASSERT_FALSE(st[j].feasible(k)) << "stage " << j << " node " << k;
}

TEST(DpCoreProperty, CumulativeCostBound) {
  CoarsePendulum c;
  BackwardRecursion rec(c.problem, c.xgrid, c.ugrid);
  rec.extend_to(20);
  const double max_cost = 1.0;
  for (std::size_t j = 0; j < rec.stages().size(); ++j)
    for (double v : rec.stages()[j].cost_to_go)
      if (v != kInf)
        ASSERT_LE(std::abs(v), (j + 1) * max_cost * (1 + 1e-12));
}

TEST(DpCoreProperty, PolicyIndicesAddressControlNodes) {
  CoarsePendulum c;
  BackwardRecursion rec(c.problem, c.xgrid, c.ugrid);
  rec.extend_to(10);
  for (const auto &st : rec.stages())
    for (std::size_t k = 0; k < c.xgrid.size(); ++k) {
      ASSERT_EQ(st.feasible(k), st.policy[k] != kNoControl);
      if (st.feasible(k))
        ASSERT_LT(st.policy[k], c.ugrid.size());
    }
}

TEST(ForwardStep, NodeEntryAppliesStoredControlExactly) {
  auto p = scalar_problem([](double x, double u) { return x + 0.1 * u; },
                          [](double, double) { return 0.0; },
                          [](double, double) { return -1.0; });
  CartesianGrid xg({{0, 1, 0.25}}), ug({{-1, 1, 0.5}});
  StageTable t = StageTable::terminal(xg);
  t.policy = {4, 3, 2, 1, 4};
  const ForwardEnsemble ens = seed_ensemble(xg, t);
  ASSERT_EQ(feasible_indices(ens).size(), 5u);
  const ForwardEnsemble next = forward_step(p, xg, ug, t, ens);
  for (std::size_t i = 0; i < 4; ++i) {
    const double x = xg.node_coord(i)[0];
    const double u = ug.node_coord(t.policy[i])[0];
    EXPECT_TRUE(next.feasible[i]);
    EXPECT_EQ(next.state(i)[0], x + 0.1 * u);
  }
  // The last node is pushed to 1.1, outside the box: dropped, state frozen.
  EXPECT_FALSE(next.feasible[4]);
  EXPECT_EQ(next.state(4)[0], 1.0);
  EXPECT_EQ(next.step, 1u);
}

TEST(ForwardStep, InvertedPendulumStaysAtFixedPoint) {
  const ProblemDef p = builtin_min_time_pendulum({0.1, 0.1});
  CartesianGrid xg({{M_PI - 0.5, M_PI + 0.5, 0.25}, {-0.5, 0.5, 0.25}});
  CartesianGrid ug({{-1, 1, 0.5}});
  StageTable t = StageTable::terminal(xg);
  t.policy.assign(xg.size(), 2);
  ForwardEnsemble ens = seed_ensemble(xg, t);
  const std::size_t centre = 2 * xg.stride(0) + 2;
  for (int k = 0; k < 10; ++k)
    ens = forward_step(p, xg, ug, t, ens);
  EXPECT_TRUE(ens.feasible[centre]);
  EXPECT_NEAR(ens.state(centre)[0], M_PI, 1e-12);
  EXPECT_NEAR(ens.state(centre)[1], 0.0, 1e-12);
}

TEST(ForwardStep, InfeasiblePolicyCornerDropsEntry) {
  auto p = scalar_problem([](double x, double) { return x; },
                          [](double, double) { return 0.0; },
                          [](double, double) { return -1.0; });
  CartesianGrid xg({{0, 2, 1}}), ug({{0, 1, 1}});
  StageTable t = StageTable::terminal(xg);
  t.policy = {0, 0, kNoControl};
  t.cost_to_go[2] = kInf;
  ForwardEnsemble ens = seed_ensemble(xg, t);
  EXPECT_EQ(feasible_indices(ens), (std::vector<std::size_t>{0, 1}));
  ens.state(0)[0] = 1.5;
  const ForwardEnsemble next = forward_step(p, xg, ug, t, ens);
  EXPECT_EQ(feasible_indices(next), (std::vector<std::size_t>{1}));
  EXPECT_EQ(next.state(0)[0], 1.5);
}

TEST(DpCoreProperty, ForwardFeasibilityIsMonotone) {
  CoarsePendulum c;
  BackwardRecursion rec(c.problem, c.xgrid, c.ugrid);
  rec.extend_to(15);
  ForwardEnsemble ens = seed_ensemble(c.xgrid, rec.first_stage());
  for (int k = 0; k < 10; ++k) {
    const ForwardEnsemble next =
        forward_step(c.problem, c.xgrid, c.ugrid, rec.first_stage(), ens);
    for (std::size_t i = 0; i < ens.size(); ++i) {
      if (!ens.feasible[i]) {
        ASSERT_FALSE(next.feasible[i]);
        ASSERT_EQ(next.state(i)[0], ens.state(i)[0]);
      } else if (next.feasible[i]) {
        ASSERT_TRUE(c.xgrid.contains(next.state(i)));
      }
    }
    ens = next;
  }
}

} // namespace
} // namespace ucpadp
