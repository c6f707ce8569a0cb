#pragma once

#include "qtf/field.hpp"
#include "qtf/tensor_algebra.hpp"

namespace qtf {

struct FluidStepReport {
  double div_residual = 0.0;  // max |div u| after projection
  int poisson_iters = 0;      // CG iterations (Box only)
  double dt_used = 0.0;
};

/// Result of splitting u = v + grad(phi) with div v = 0.
struct Projection {
  VelocityField velocity;
  ScalarField potential;  // zero mean
  int iterations = 0;
  double div_residual = 0.0;
};

/// Periodic: exact projection mode by mode. Box: orthogonal projection onto
/// the kernel of the interior centred divergence (walls held at zero), via a
/// conjugate-gradient pressure solve. Throws SolverError on non-convergence.
Projection leray_project(const VelocityField& u);

/// max |div u| measured with the divergence the projection annihilates
/// (spectral for Periodic, centred on interior nodes for Box).
double divergence_residual(const VelocityField& u);

/// 0.4 * h_min / max(|u|_inf, 1e-8).
double advective_dt_limit(const VelocityField& u);

/// (u . grad) u.
VelocityField convective_term(const VelocityField& u);

struct MomentumStep {
  VelocityField u;
  ScalarField p;
  FluidStepReport report;
};

/// Backward-Euler viscous solve of u + dt * rhs followed by projection:
/// u' = P (I - dt nu Lap)^{-1} (u + dt rhs). The pressure satisfies
/// u' = u* + dt grad p and has zero mean. No stability check.
MomentumStep stokes_step(const VelocityField& u, const VelocityField& rhs, double dt,
                         const ModelParams& params);

/// One IMEX step of  u_t + (u.grad)u = nu Lap u + grad p + force,  div u = 0,
/// with explicit advection and force. Throws StepRejected when dt exceeds
/// the advective limit, std::invalid_argument for dt <= 0.
MomentumStep momentum_step(const VelocityField& u, const VelocityField& force, double dt,
                           const ModelParams& params);

}  // namespace qtf
