#include "qtf/coupled_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qtf/errors.hpp"
#include "qtf/parallel.hpp"
#include "qtf/qtensor_solver.hpp"
#include "qtf/spectral.hpp"

namespace qtf {

namespace {

MatrixField elastic_stress(const QTensorField& q, const QTensorGradient& gq,
                           const QTensorField& lap_q, const ModelParams& params) {
  MatrixField s(q.domain());
  const double L = params.L;
  parallel_for(static_cast<int>(q.size()), [&](int i) {
    const QTensor d[3] = {q_at(gq[0], i), q_at(gq[1], i), q_at(gq[2], i)};
    const Mat3 comm = commutator_stress(q_at(q, i), q_at(lap_q, i));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s(3 * a + b, i) = -L * contract(d[a], d[b]) + L * comm[a][b];
  });
  return s;
}

VelocityField spectral_divergence(const MatrixField& s) {
  const DomainSpec& d = s.domain();
  auto& plan = spectral_plan(d);
  std::array<std::vector<Complex>, 3> fhat;
  for (auto& f : fhat) f.assign(plan.spectral_size(), Complex(0.0, 0.0));
  std::vector<Complex> shat(plan.spectral_size());
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      plan.forward(s.component(3 * a + b), shat);
      const auto& kb = plan.wavenumber(b);
      for (std::size_t f = 0; f < shat.size(); ++f) {
        int idx[3];
        plan.mode(f, idx[0], idx[1], idx[2]);
        fhat[a][f] += Complex(0.0, kb[idx[b]]) * shat[f];
      }
    }
  VelocityField out(d);
  for (int a = 0; a < 3; ++a) plan.inverse(fhat[a], out.component(a));
  return out;
}

double l2_distance(const VelocityField& a, const VelocityField& b) { return lp_norm(a - b, 2.0); }
double l2_distance(const QTensorField& a, const QTensorField& b) { return lp_norm(a - b, 2.0); }

}  // namespace

VelocityField assemble_elastic_force(const QTensorField& q, const QTensorGradient& grad_q,
                                     const QTensorField& lap_q, const ModelParams& params) {
  const MatrixField s = elastic_stress(q, grad_q, lap_q, params);
  if (q.domain().bc == BoundaryKind::Periodic) return spectral_divergence(s);
  return div_mat(s, BoundaryRule::OneSided);
}

VelocityField assemble_elastic_force(const QTensorField& q, const ModelParams& params) {
  return assemble_elastic_force(q, grad(q, BoundaryRule::Mirror),
                                laplacian(q, BoundaryRule::Mirror), params);
}

double stable_dt(const SimState& state, const ModelParams& params) {
  const double adv = advective_dt_limit(state.u), bulk = bulk_dt_limit(state.Q, params);
  // std::min would drop a NaN coming from a non-finite field.
  if (std::isnan(adv) || std::isnan(bulk)) return std::numeric_limits<double>::quiet_NaN();
  return std::min(adv, bulk);
}

StepResult step(const SimState& state, double dt, const ModelParams& params,
                const StepOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double limit = stable_dt(state, params);
  if (!std::isfinite(limit))
    throw SolverError("non-finite state at t=" + std::to_string(state.t), limit, 0);
  if (dt > limit) {
    std::ostringstream msg;
    msg << "step rejected at t=" << state.t << ": dt " << dt << " exceeds stability limit " << limit;
    throw StepRejected(msg.str(), limit);
  }
  const auto grad_q = grad(state.Q, BoundaryRule::Mirror);
  const auto lap_q = laplacian(state.Q, BoundaryRule::Mirror);
  const VelocityField force = assemble_elastic_force(state.Q, grad_q, lap_q, params);

  MomentumStep mom = momentum_step(state.u, force, dt, params);

  QTensorField rhs = advect_q(grad_q, state.u);
  rhs += bulk_source(state.Q, params);

  StepResult out;
  out.state.u = std::move(mom.u);
  out.state.p = std::move(mom.p);
  out.state.Q = q_linear_step(state.Q, rhs, dt, params);
  out.state.t = state.t + dt;
  out.fluid = mom.report;
  if (options.record)
    out.record = compute_diagnostics(out.state, params, mom.report.div_residual, options.with_monitor);
  return out;
}

double PicardReport::max_ratio() const {
  double m = 0.0;
  for (double r : ratios) m = std::max(m, r);
  return m;
}

PicardResult picard_solve(const SimState& state0, double window, double dt,
                          const ModelParams& params, double tol, int max_iters,
                          PicardMetric metric) {
  if (!(dt > 0.0) || !(window > 0.0)) throw std::invalid_argument("picard_solve: dt and window must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("picard_solve: max_iters must be >= 1");
  const double ratio = window / dt;
  const long steps = std::lround(ratio);
  if (steps < 1 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("picard_solve: window must be a whole number of steps");
  if (steps > 256) throw std::invalid_argument("picard_solve: window is limited to 256 steps");
  const std::size_t K = static_cast<std::size_t>(steps);

  std::vector<SimState> prev(K + 1, state0);
  for (std::size_t k = 0; k <= K; ++k) prev[k].t = state0.t + static_cast<double>(k) * dt;

  PicardResult result;
  PicardReport& report = result.report;
  std::vector<SimState> next(K + 1);
  for (int it = 1; it <= max_iters; ++it) {
    next[0] = state0;
    for (std::size_t k = 0; k < K; ++k) {
      const SimState& frozen = prev[k];
      const double limit = stable_dt(frozen, params);
      if (dt > limit) {
        std::ostringstream msg;
        msg << "picard iterate " << it << " violates the stability limit at step " << k << ": dt "
            << dt << " > " << limit;
        throw StepRejected(msg.str(), limit);
      }
      const auto grad_q = grad(frozen.Q, BoundaryRule::Mirror);
      const auto lap_q = laplacian(frozen.Q, BoundaryRule::Mirror);
      VelocityField rhs_u = assemble_elastic_force(frozen.Q, grad_q, lap_q, params);
      rhs_u -= convective_term(frozen.u);
      MomentumStep mom = stokes_step(next[k].u, rhs_u, dt, params);

      QTensorField rhs_q = advect_q(grad_q, frozen.u);
      rhs_q += bulk_source(frozen.Q, params);

      next[k + 1].u = std::move(mom.u);
      next[k + 1].p = std::move(mom.p);
      next[k + 1].Q = q_linear_step(next[k].Q, rhs_q, dt, params);
      next[k + 1].t = prev[k + 1].t;
    }

    double delta = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
      double dk;
      if (metric == PicardMetric::L2) {
        dk = l2_distance(next[k].u, prev[k].u) + l2_distance(next[k].Q, prev[k].Q);
      } else {
        dk = sobolev_monitor(next[k].u - prev[k].u, next[k].Q - prev[k].Q, params);
      }
      delta = std::max(delta, dk);
    }
    if (!report.deltas.empty()) {
      const double last = report.deltas.back();
      report.ratios.push_back(last > 0.0 ? delta / last : 0.0);
    }
    report.deltas.push_back(delta);
    report.iters = it;
    prev.swap(next);
    if (delta <= tol) {
      report.converged = true;
      break;
    }
  }
  result.trajectory = std::move(prev);
  return result;
}

}  // namespace qtf
