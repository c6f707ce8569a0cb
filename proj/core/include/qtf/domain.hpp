#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace qtf {

/// Periodic: n equispaced points per axis at x_i = i*h.
/// Box: n cells with n+1 nodes per axis (walls on the first and last node);
/// no-slip velocity and homogeneous Neumann Q on the walls.
enum class BoundaryKind { Periodic, Box };

std::string to_string(BoundaryKind kind);
BoundaryKind boundary_kind_from_string(const std::string& s);

struct DomainSpec {
  int nx = 16;
  int ny = 16;
  int nz = 16;
  double lx = 2.0 * std::numbers::pi;
  double ly = 2.0 * std::numbers::pi;
  double lz = 2.0 * std::numbers::pi;
  BoundaryKind bc = BoundaryKind::Periodic;

  static DomainSpec cube(int n, double l, BoundaryKind bc) { return {n, n, n, l, l, l, bc}; }

  /// Throws std::invalid_argument when a cell count is below 8, a length is
  /// not positive, or a periodic axis has an odd cell count.
  void validate() const;

  int cells(int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
  double length(int axis) const { return axis == 0 ? lx : axis == 1 ? ly : lz; }
  double spacing(int axis) const { return length(axis) / cells(axis); }
  double min_spacing() const;
  int points(int axis) const { return bc == BoundaryKind::Periodic ? cells(axis) : cells(axis) + 1; }
  std::array<int, 3> shape() const { return {points(0), points(1), points(2)}; }
  std::size_t size() const {
    return static_cast<std::size_t>(points(0)) * points(1) * points(2);
  }
  double volume() const { return lx * ly * lz; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(points(0)) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(points(1)) * k);
  }
  double coordinate(int axis, int i) const { return i * spacing(axis); }

  /// Quadrature weight per point: h^3 for periodic grids, trapezoidal
  /// (halved on each wall) for Box grids, so constants integrate exactly.
  std::vector<double> quadrature_weights() const;

  /// True for wall nodes of a Box grid.
  bool on_wall(int i, int j, int k) const;

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

}  // namespace qtf
