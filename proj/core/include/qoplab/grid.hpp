#pragma once

#include <array>
#include <cstddef>

namespace qoplab {

/// Multi-index of a grid point. Axes beyond the real dimension are zero.
using GridPoint = std::array<int, 4>;

/// Point of the unit cell [0,1)^{2n}; trailing entries are zero.
using Position = std::array<double, 4>;

/// Periodic uniform grid with `grid` points per axis in `real_dim` axes.
/// Linear index: axis 0 varies fastest.
struct GridShape {
  int grid = 0;
  int real_dim = 0;

  std::size_t size() const noexcept {
    std::size_t s = 1;
    for (int a = 0; a < real_dim; ++a) s *= static_cast<std::size_t>(grid);
    return s;
  }

  GridPoint coords(std::size_t index) const noexcept {
    GridPoint c{0, 0, 0, 0};
    for (int a = 0; a < real_dim; ++a) {
      c[a] = static_cast<int>(index % static_cast<std::size_t>(grid));
      index /= static_cast<std::size_t>(grid);
    }
    return c;
  }

  /// Wraps every coordinate into [0, grid).
  std::size_t index(const GridPoint& c) const noexcept {
    std::size_t idx = 0;
    for (int a = real_dim - 1; a >= 0; --a) {
      int v = c[a] % grid;
      if (v < 0) v += grid;
      idx = idx * static_cast<std::size_t>(grid) + static_cast<std::size_t>(v);
    }
    return idx;
  }

  std::size_t shift(std::size_t index, int axis, int step) const noexcept {
    GridPoint c = coords(index);
    c[axis] += step;
    return this->index(c);
  }

  Position position(std::size_t index) const noexcept {
    const GridPoint c = coords(index);
    Position x{0.0, 0.0, 0.0, 0.0};
    for (int a = 0; a < real_dim; ++a) x[a] = static_cast<double>(c[a]) / grid;
    return x;
  }

  /// Signed minimal-image lattice displacement from `from` to `to` along
  /// `axis`, in [-grid/2, grid/2).
  int displacement(std::size_t from, std::size_t to, int axis) const noexcept {
    int d = coords(to)[axis] - coords(from)[axis];
    d %= grid;
    if (d < -grid / 2) d += grid;
    if (d >= grid / 2) d -= grid;
    return d;
  }

  bool operator==(const GridShape&) const = default;
};

}  // namespace qoplab
