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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ucpadp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Node-valued field over a grid; +inf marks an infeasible node.
using NodeField = std::vector<double>;

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// One axis of a Cartesian grid: nodes at lo, lo + spacing, ... not past hi.
struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  double spacing = 1.0;

  /// Number of nodes on the axis. Throws UsageError if the spec is malformed.
  std::size_t count() const;
  double coord(std::size_t j) const;
  /// Coordinate of the last node (<= hi).
  double last() const { return coord(count() - 1); }
};

/// Position of a query point inside the lattice: the lower corner of its cell
/// and the per-axis fractional offset in [0, 1].
struct CellCoords {
  std::size_t base = 0;
  std::vector<double> frac;
};

/// The 2^n corners of the cell containing a query point with their
/// multilinear weights. Corner c takes the upper node on axis i iff bit i of
/// c is set.
struct Cell {
  std::vector<std::size_t> corners;
  std::vector<double> weights;
};

class CartesianGrid {
public:
  CartesianGrid() = default;
  explicit CartesianGrid(std::vector<AxisSpec> axes);

  std::size_t dims() const { return axes_.size(); }
  std::size_t size() const { return size_; }
  const std::vector<AxisSpec> &axes() const { return axes_; }
  const AxisSpec &axis(std::size_t i) const { return axes_[i]; }
  std::size_t count(std::size_t i) const { return counts_[i]; }
  /// Row-major stride of axis i (axis 0 slowest).
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  std::vector<double> node_coord(std::size_t index) const;
  void node_coord(std::size_t index, std::span<double> out) const;
  std::vector<std::size_t> node_multi_index(std::size_t index) const;

  bool contains(std::span<const double> x) const;

  /// Cell coordinates of x, or nullopt when x lies outside the node box.
  /// Queries within 1e-9 cells of a node snap onto it exactly.
  std::optional<CellCoords> cell_coords(std::span<const double> x) const;
  bool cell_coords(std::span<const double> x, std::size_t &base,
                   std::span<double> frac) const;

  std::optional<Cell> locate_cell(std::span<const double> x) const;

  std::size_t corner_index(std::size_t base, std::size_t corner) const {
    std::size_t k = base;
    for (std::size_t i = 0; i < axes_.size(); ++i)
      if (corner & (std::size_t{1} << i))
        k += strides_[i];
    return k;
  }

private:
  std::vector<AxisSpec> axes_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Multilinear weight of one corner given the per-axis fractions.
inline double corner_weight(std::span<const double> frac, std::size_t corner) {
  double w = 1.0;
  for (std::size_t i = 0; i < frac.size(); ++i)
    w *= (corner & (std::size_t{1} << i)) ? frac[i] : 1.0 - frac[i];
  return w;
}

/// Interpolates field at a located cell. Any positively weighted infinite
/// corner makes the result infinite; zero-weight corners are never read.
inline double interpolate_at(const CartesianGrid &grid, std::span<const double> field,
                             std::size_t base, std::span<const double> frac) {
  const std::size_t corners = std::size_t{1} << grid.dims();
  double acc = 0.0;
  for (std::size_t c = 0; c < corners; ++c) {
    const double w = corner_weight(frac, c);
    if (w == 0.0)
      continue;
    const double v = field[grid.corner_index(base, c)];
    if (v == kInf)
      return kInf;
    acc += w * v;
  }
  return acc;
}

/// Multilinear interpolation of field at x; +inf outside the grid box.
double interpolate(const CartesianGrid &grid, std::span<const double> field,
                   std::span<const double> x);

} // namespace ucpadp
