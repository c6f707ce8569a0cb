#pragma once

#include <vector>

#include "qtf/diagnostics.hpp"
#include "qtf/fluid_solver.hpp"
#include "qtf/operators.hpp"
#include "qtf/state.hpp"

namespace qtf {

/// f_alpha = d_beta S_{alpha beta} with
///   S = -L (d_alpha Q : d_beta Q) + L (Q Lap Q - Lap Q Q),
/// evaluated in divergence form.
VelocityField assemble_elastic_force(const QTensorField& q, const ModelParams& params);

/// Same, reusing grad Q and Lap Q computed by the caller.
VelocityField assemble_elastic_force(const QTensorField& q, const QTensorGradient& grad_q,
                                     const QTensorField& lap_q, const ModelParams& params);

/// Largest dt accepted by both the advective and the bulk stability rule.
double stable_dt(const SimState& state, const ModelParams& params);

struct StepOptions {
  bool with_monitor = true;
  bool record = true;  // false leaves StepResult::record default-constructed
};

struct StepResult {
  SimState state;
  DiagnosticsRecord record;
  FluidStepReport fluid;
};

/// Advances (u, Q, p) by dt with first-order splitting:
///   1. elastic force from Q^n,
///   2. momentum step  -> u^{n+1}, p^{n+1},
///   3. Q step driven by u^n -> Q^{n+1}.
/// Throws StepRejected when dt exceeds stable_dt(state) and SolverError when
/// the state is no longer finite.
StepResult step(const SimState& state, double dt, const ModelParams& params,
                const StepOptions& options = {});

enum class PicardMetric { L2, Monitor };

struct PicardReport {
  int iters = 0;
  std::vector<double> deltas;  // deltas[n-1]: distance between iterates n and n-1
  std::vector<double> ratios;  // deltas[n] / deltas[n-1]
  bool converged = false;

  double max_ratio() const;
};

struct PicardResult {
  std::vector<SimState> trajectory;  // window time levels 0..K of the last iterate
  PicardReport report;
};

/// Successive approximations over a window of K = window/dt steps. Iterate 0
/// is the constant extension of state0; iterate n+1 solves the linear
/// implicit Stokes and diffusion problems with every explicit term (advection,
/// elastic force, bulk source) frozen at iterate n. The fixed point is the
/// trajectory produced by step(). Non-convergence is reported, not thrown.
///
/// Throws std::invalid_argument when the window is not a whole number of
/// steps in [1, 256], and StepRejected when a frozen iterate violates the
/// stability limits.
PicardResult picard_solve(const SimState& state0, double window, double dt,
                          const ModelParams& params, double tol, int max_iters,
                          PicardMetric metric = PicardMetric::L2);

}  // namespace qtf
