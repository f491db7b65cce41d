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
#include "ucpadp/problem.hpp"

#include <stdexcept>

namespace ucpadp {

class EquilibriumError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EquilibriumPoint {
  Vec x_eq;
  Vec u_eq;
  /// Relaxed stage cost at the pair.
  double cost = 0.0;
  /// Infinity norm of x - f_d(x, u).
  double residual = 0.0;
};

/// Cheapest admissible gridded pair (x, u) that is stationary within eq_tol.
/// Equal costs resolve to the smaller residual, then to the smaller pair
/// index. Without relaxation but with a nominal average, pairs whose average
/// function misses it by more than half a state spacing are skipped.
EquilibriumPoint equilibrium_search(const ProblemDef &p, const CartesianGrid &xgrid,
                                    const CartesianGrid &ugrid, double eq_tol,
                                    unsigned threads = 1);

/// Largest state spacing.
double default_equilibrium_tolerance(const CartesianGrid &xgrid);

} // namespace ucpadp
