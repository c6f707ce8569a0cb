#include "qtf/domain.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtf {

std::string to_string(BoundaryKind kind) {
  return kind == BoundaryKind::Periodic ? "periodic" : "box";
}

BoundaryKind boundary_kind_from_string(const std::string& s) {
  if (s == "periodic") return BoundaryKind::Periodic;
  if (s == "box") return BoundaryKind::Box;
  throw std::invalid_argument("unknown boundary kind '" + s + "' (expected periodic or box)");
}

void DomainSpec::validate() const {
  for (int axis = 0; axis < 3; ++axis) {
    const std::string name(1, "xyz"[axis]);
    if (cells(axis) < 8) throw std::invalid_argument("n" + name + " must be >= 8");
    if (!(length(axis) > 0.0)) throw std::invalid_argument("l" + name + " must be positive");
    if (bc == BoundaryKind::Periodic && cells(axis) % 2 != 0)
      throw std::invalid_argument("n" + name + " must be even on a periodic domain");
  }
}

double DomainSpec::min_spacing() const {
  return std::min({spacing(0), spacing(1), spacing(2)});
}

std::vector<double> DomainSpec::quadrature_weights() const {
  std::array<std::vector<double>, 3> w1;
  for (int axis = 0; axis < 3; ++axis) {
    w1[axis].assign(points(axis), spacing(axis));
    if (bc == BoundaryKind::Box) {
      w1[axis].front() *= 0.5;
      w1[axis].back() *= 0.5;
    }
  }
  std::vector<double> w(size());
  for (int k = 0; k < points(2); ++k)
    for (int j = 0; j < points(1); ++j)
      for (int i = 0; i < points(0); ++i) w[index(i, j, k)] = w1[0][i] * w1[1][j] * w1[2][k];
  return w;
}

bool DomainSpec::on_wall(int i, int j, int k) const {
  if (bc == BoundaryKind::Periodic) return false;
  return i == 0 || j == 0 || k == 0 || i == nx || j == ny || k == nz;
}

}  // namespace qtf
