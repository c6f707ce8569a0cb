#pragma once

#include "qtf/field.hpp"
#include "qtf/operators.hpp"
#include "qtf/tensor_algebra.hpp"

namespace qtf {

/// -(u . grad) Q.
QTensorField advect_q(const QTensorField& q, const VelocityField& u);

/// Same, reusing a precomputed gradient of Q.
QTensorField advect_q(const QTensorGradient& grad_q, const VelocityField& u);

/// Gamma * bulk_molecular_field(Q) pointwise.
QTensorField bulk_source(const QTensorField& q, const ModelParams& params);

/// 0.2 / (Gamma (|a| + |b| |Q|_inf + c |Q|_inf^2) + 1e-8).
double bulk_dt_limit(const QTensorField& q, const ModelParams& params);

/// (I - dt Gamma L Lap)^{-1} (Q + dt rhs), mirror (Neumann) walls on Box.
QTensorField q_linear_step(const QTensorField& q, const QTensorField& rhs, double dt,
                           const ModelParams& params);

/// One step of  Q_t + (u.grad)Q = Gamma (L Lap Q + bulk(Q))  with implicit
/// diffusion and explicit advection and bulk source. Throws StepRejected
/// when dt exceeds the advective or bulk limit.
QTensorField q_step(const QTensorField& q, const VelocityField& u, double dt,
                    const ModelParams& params);

}  // namespace qtf
