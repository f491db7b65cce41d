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

#include <iosfwd>
#include <string>
#include <vector>

namespace ucpadp::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kConverged = 0,
  kUsageError = 1,
  kHitNMax = 2,
  kInfeasibleRollout = 3,
};

/// Parses argv and runs one subcommand (solve, rollout, compare, sweep,
/// equilibrium). Diagnostics go to err, CSV rows printed by `equilibrium`
/// go to out.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace ucpadp::cli
