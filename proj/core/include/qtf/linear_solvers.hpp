#pragma once

#include <functional>
#include <span>

#include "qtf/domain.hpp"

namespace qtf {

/// Solves (I - coef * Lap_h) x = rhs in place for one component.
///   Periodic:          spectral Laplacian.
///   Box, Neumann:      mirror-ghost second differences on all nodes (DCT-I).
///   Box, Dirichlet:    second differences on interior nodes, wall values
///                      forced to zero (DST-I).
enum class WallCondition { Neumann, Dirichlet };

void helmholtz_solve(const DomainSpec& domain, std::span<double> x, double coef,
                     WallCondition wall = WallCondition::Neumann);

struct CgResult {
  int iterations = 0;
  double residual = 0.0;  // max-norm of the final recursive residual
  bool converged = false;
};

/// Conjugate gradients for a symmetric positive semi-definite operator with
/// a consistent right-hand side. Stops when max|r| <= tol.
CgResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                            std::span<const double> rhs, std::span<double> x, double tol,
                            int max_iters);

}  // namespace qtf
