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

#include "ucpadp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ucpadp {

namespace {

// Relative slack used when counting nodes and snapping queries to nodes.
constexpr double kSnap = 1e-9;

} // namespace

std::size_t AxisSpec::count() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(spacing))
    throw UsageError("axis bounds and spacing must be finite");
  if (!(spacing > 0.0))
    throw UsageError("axis spacing must be positive, got " + std::to_string(spacing));
  if (hi < lo)
    throw UsageError("axis upper bound below lower bound");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / spacing + kSnap)) + 1;
  if (n < 2)
    throw UsageError("axis must hold at least two nodes");
  return n;
}

double AxisSpec::coord(std::size_t j) const {
  return std::min(hi, lo + static_cast<double>(j) * spacing);
}

CartesianGrid::CartesianGrid(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  if (axes_.empty())
    throw UsageError("grid needs at least one axis");
  if (axes_.size() > 16)
    throw UsageError("grid dimension too large");
  counts_.resize(axes_.size());
  strides_.resize(axes_.size());
  size_ = 1;
  for (std::size_t i = axes_.size(); i-- > 0;) {
    counts_[i] = axes_[i].count();
    strides_[i] = size_;
    size_ *= counts_[i];
  }
}

std::vector<std::size_t> CartesianGrid::node_multi_index(std::size_t index) const {
  if (index >= size_)
    throw UsageError("node index out of range");
  std::vector<std::size_t> j(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    j[i] = index / strides_[i];
    index %= strides_[i];
  }
  return j;
}

void CartesianGrid::node_coord(std::size_t index, std::span<double> out) const {
  if (index >= size_)
    throw UsageError("node index out of range");
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    out[i] = axes_[i].coord(index / strides_[i]);
    index %= strides_[i];
  }
}

std::vector<double> CartesianGrid::node_coord(std::size_t index) const {
  std::vector<double> x(axes_.size());
  node_coord(index, x);
  return x;
}

bool CartesianGrid::cell_coords(std::span<const double> x, std::size_t &base,
                                std::span<double> frac) const {
  base = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const double t = (x[i] - axes_[i].lo) / axes_[i].spacing;
    const auto last = static_cast<double>(counts_[i] - 1);
    // Also rejects NaN.
    if (!(t >= -kSnap && t <= last + kSnap))
      return false;
    double cell = std::floor(t);
    double f = t - cell;
    const double nearest = std::round(t);
    if (std::abs(t - nearest) <= kSnap) {
      cell = nearest;
      f = 0.0;
    }
    if (cell >= last) {
      cell = last - 1.0;
      f = 1.0;
    } else if (cell < 0.0) {
      cell = 0.0;
      f = 0.0;
    }
    base += static_cast<std::size_t>(cell) * strides_[i];
    frac[i] = f;
  }
  return true;
}

std::optional<CellCoords> CartesianGrid::cell_coords(std::span<const double> x) const {
  if (x.size() != axes_.size())
    throw UsageError("query dimension does not match grid");
  CellCoords c;
  c.frac.resize(axes_.size());
  if (!cell_coords(x, c.base, c.frac))
    return std::nullopt;
  return c;
}

bool CartesianGrid::contains(std::span<const double> x) const {
  if (x.size() != axes_.size())
    throw UsageError("query dimension does not match grid");
  double frac[16];
  std::size_t base = 0;
  return cell_coords(x, base, {frac, axes_.size()});
}

std::optional<Cell> CartesianGrid::locate_cell(std::span<const double> x) const {
  const auto cc = cell_coords(x);
  if (!cc)
    return std::nullopt;
  const std::size_t n = std::size_t{1} << axes_.size();
  Cell cell;
  cell.corners.resize(n);
  cell.weights.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    cell.corners[c] = corner_index(cc->base, c);
    cell.weights[c] = corner_weight(cc->frac, c);
  }
  return cell;
}

double interpolate(const CartesianGrid &grid, std::span<const double> field,
                   std::span<const double> x) {
  if (field.size() != grid.size())
    throw UsageError("field length does not match grid size");
  const auto cc = grid.cell_coords(x);
  if (!cc)
    return kInf;
  return interpolate_at(grid, field, cc->base, cc->frac);
}

} // namespace ucpadp
