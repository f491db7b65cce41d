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

#include "ucpadp/equilibrium.hpp"

#include "ucpadp/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ucpadp {

namespace {

struct Candidate {
  double cost = kInf;
  double residual = kInf;
  std::size_t pair = SIZE_MAX;

  bool better_than(const Candidate &o) const {
    if (cost != o.cost)
      return cost < o.cost;
    if (residual != o.residual)
      return residual < o.residual;
    return pair < o.pair;
  }
};

} // namespace

double default_equilibrium_tolerance(const CartesianGrid &xgrid) {
  double d = 0.0;
  for (const auto &a : xgrid.axes())
    d = std::max(d, a.spacing);
  return d;
}

EquilibriumPoint equilibrium_search(const ProblemDef &p, const CartesianGrid &xgrid,
                                    const CartesianGrid &ugrid, double eq_tol,
                                    unsigned threads) {
  validate(p);
  if (!(eq_tol > 0.0))
    throw UsageError("equilibrium tolerance must be positive");
  const bool average_filter = p.lambda == 0.0 && p.nominal_average.has_value();
  const double average_tol = 0.5 * default_equilibrium_tolerance(xgrid);
  const std::size_t nu = ugrid.size();

  // One best candidate per state node, reduced in node order afterwards.
  std::vector<Candidate> best(xgrid.size());
  parallel_for(xgrid.size(), threads, [&](std::size_t begin, std::size_t end) {
    Vec x(xgrid.dims()), u(ugrid.dims()), next(xgrid.dims());
    for (std::size_t k = begin; k < end; ++k) {
      xgrid.node_coord(k, x);
      for (std::size_t j = 0; j < nu; ++j) {
        ugrid.node_coord(j, u);
        if (!admissible(p, x, u))
          continue;
        if (average_filter && std::abs(p.average_fn(x, u) - *p.nominal_average) > average_tol)
          continue;
        p.dynamics(x, u, next);
        double res = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
          res = std::max(res, std::abs(x[i] - next[i]));
        if (!(res <= eq_tol))
          continue;
        const Candidate c{relaxed_cost(p, x, u), res, k * nu + j};
        if (c.better_than(best[k]))
          best[k] = c;
      }
    }
  });

  Candidate winner;
  for (const auto &c : best)
    if (c.pair != SIZE_MAX && c.better_than(winner))
      winner = c;
  if (winner.pair == SIZE_MAX)
    throw EquilibriumError("no gridded equilibrium within tolerance " + std::to_string(eq_tol) +
                           "; try a larger tolerance");
  EquilibriumPoint eq;
  eq.x_eq = xgrid.node_coord(winner.pair / nu);
  eq.u_eq = ugrid.node_coord(winner.pair % nu);
  eq.cost = winner.cost;
  eq.residual = winner.residual;
  return eq;
}

} // namespace ucpadp
