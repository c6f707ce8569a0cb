#include "qtf/fluid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qtf/errors.hpp"
#include "qtf/linear_solvers.hpp"
#include "qtf/operators.hpp"
#include "qtf/parallel.hpp"
#include "qtf/spectral.hpp"

namespace qtf {

namespace {

// ---- Periodic -------------------------------------------------------------

/// Projects the spectra of a velocity field in place; returns the spectrum of
/// the potential.
std::vector<Complex> project_spectra(SpectralPlan& plan, std::array<std::vector<Complex>, 3>& uhat) {
  std::vector<Complex> phi(plan.spectral_size());
  const auto& kx = plan.wavenumber(0);
  const auto& ky = plan.wavenumber(1);
  const auto& kz = plan.wavenumber(2);
  for (std::size_t f = 0; f < phi.size(); ++f) {
    int ix, iy, iz;
    plan.mode(f, ix, iy, iz);
    const double k[3] = {kx[ix], ky[iy], kz[iz]};
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (kk == 0.0) continue;
    const Complex kdotu = k[0] * uhat[0][f] + k[1] * uhat[1][f] + k[2] * uhat[2][f];
    for (int a = 0; a < 3; ++a) uhat[a][f] -= k[a] * kdotu / kk;
    phi[f] = Complex(0.0, -1.0) * kdotu / kk;
  }
  return phi;
}

double periodic_div_residual(SpectralPlan& plan, const std::array<std::vector<Complex>, 3>& uhat) {
  std::vector<Complex> dhat(plan.spectral_size());
  for (std::size_t f = 0; f < dhat.size(); ++f) {
    int ix, iy, iz;
    plan.mode(f, ix, iy, iz);
    dhat[f] = Complex(0.0, 1.0) * (plan.wavenumber(0)[ix] * uhat[0][f] +
                                   plan.wavenumber(1)[iy] * uhat[1][f] +
                                   plan.wavenumber(2)[iz] * uhat[2][f]);
  }
  std::vector<double> div(plan.real_size());
  plan.inverse(dhat, div);
  double m = 0.0;
  for (double v : div) m = std::max(m, std::abs(v));
  return m;
}

// ---- Box ------------------------------------------------------------------

int stride(const DomainSpec& d, int axis) {
  return axis == 0 ? 1 : axis == 1 ? d.points(0) : d.points(0) * d.points(1);
}

template <class Kernel>
void for_each_interior(const DomainSpec& d, Kernel&& kernel) {
  parallel_for(d.nz - 1, [&](int km) {
    const int k = km + 1;
    for (int j = 1; j < d.ny; ++j)
      for (int i = 1; i < d.nx; ++i) kernel(d.index(i, j, k));
  });
}

/// Centred divergence on interior nodes; wall entries of out are zero.
void box_divergence(const DomainSpec& d, const std::array<std::span<const double>, 3>& u,
                    std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const int s[3] = {stride(d, 0), stride(d, 1), stride(d, 2)};
  const double inv2h[3] = {0.5 / d.spacing(0), 0.5 / d.spacing(1), 0.5 / d.spacing(2)};
  for_each_interior(d, [&](std::size_t idx) {
    double v = 0.0;
    for (int a = 0; a < 3; ++a) v += (u[a][idx + s[a]] - u[a][idx - s[a]]) * inv2h[a];
    out[idx] = v;
  });
}

/// Centred gradient on interior nodes of a potential that vanishes on the
/// walls; the negative adjoint of box_divergence.
void box_gradient(const DomainSpec& d, std::span<const double> phi,
                  const std::array<std::span<double>, 3>& out) {
  for (auto& o : out) std::fill(o.begin(), o.end(), 0.0);
  const int s[3] = {stride(d, 0), stride(d, 1), stride(d, 2)};
  const double inv2h[3] = {0.5 / d.spacing(0), 0.5 / d.spacing(1), 0.5 / d.spacing(2)};
  for_each_interior(d, [&](std::size_t idx) {
    for (int a = 0; a < 3; ++a) out[a][idx] = (phi[idx + s[a]] - phi[idx - s[a]]) * inv2h[a];
  });
}

Projection box_project(const VelocityField& u) {
  const DomainSpec& d = u.domain();
  const std::size_t n = u.size();
  VelocityField v = u;
  for (int k = 0; k <= d.nz; ++k)
    for (int j = 0; j <= d.ny; ++j)
      for (int i = 0; i <= d.nx; ++i)
        if (d.on_wall(i, j, k))
          for (std::size_t c = 0; c < 3; ++c) v(c, d.index(i, j, k)) = 0.0;

  std::vector<double> rhs(n);
  box_divergence(d, {v.component(0), v.component(1), v.component(2)}, rhs);
  for (double& r : rhs) r = -r;
  double bmax = 0.0;
  for (double r : rhs) bmax = std::max(bmax, std::abs(r));

  VelocityField g(d);
  std::vector<double> tmp(n);
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    box_gradient(d, x, {g.component(0), g.component(1), g.component(2)});
    box_divergence(d, {g.component(0), g.component(1), g.component(2)}, y);
    for (double& val : y) val = -val;
  };

  Projection out;
  out.potential = ScalarField(d);
  auto phi = out.potential.component(0);
  // The last term is the rounding floor of the divergence itself.
  const double vmax = lp_norm(v, std::numeric_limits<double>::infinity());
  const double tol = std::max({1e-14 * bmax, 1e-12 * std::min(1.0, bmax), 1e-14 * vmax / d.min_spacing()});
  const int max_iters = 20 * (d.nx + d.ny + d.nz) + 100;
  const CgResult cg = conjugate_gradient(apply, rhs, phi, tol, max_iters);
  if (!cg.converged) {
    std::ostringstream msg;
    msg << "pressure Poisson solve did not converge: residual " << cg.residual << " after "
        << cg.iterations << " iterations";
    throw SolverError(msg.str(), cg.residual, cg.iterations);
  }
  box_gradient(d, phi, {g.component(0), g.component(1), g.component(2)});
  v -= g;

  const auto w = d.quadrature_weights();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += w[i] * phi[i];
  mean /= d.volume();
  for (double& x : phi) x -= mean;

  out.velocity = std::move(v);
  out.iterations = cg.iterations;
  out.div_residual = divergence_residual(out.velocity);
  return out;
}

void check_finite_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
}

}  // namespace

double divergence_residual(const VelocityField& u) {
  const DomainSpec& d = u.domain();
  if (d.bc == BoundaryKind::Periodic) {
    auto& plan = spectral_plan(d);
    std::array<std::vector<Complex>, 3> uhat;
    for (int a = 0; a < 3; ++a) uhat[a] = plan.forward(u.component(a));
    return periodic_div_residual(plan, uhat);
  }
  std::vector<double> div(u.size());
  box_divergence(d, {u.component(0), u.component(1), u.component(2)}, div);
  double m = 0.0;
  for (double v : div) m = std::max(m, std::abs(v));
  return m;
}

Projection leray_project(const VelocityField& u) {
  const DomainSpec& d = u.domain();
  if (d.bc == BoundaryKind::Box) return box_project(u);
  auto& plan = spectral_plan(d);
  std::array<std::vector<Complex>, 3> uhat;
  for (int a = 0; a < 3; ++a) uhat[a] = plan.forward(u.component(a));
  const auto phihat = project_spectra(plan, uhat);
  Projection out{VelocityField(d), ScalarField(d), 0, 0.0};
  for (int a = 0; a < 3; ++a) plan.inverse(uhat[a], out.velocity.component(a));
  plan.inverse(phihat, out.potential.component(0));
  out.div_residual = periodic_div_residual(plan, uhat);
  return out;
}

double advective_dt_limit(const VelocityField& u) {
  const double umax = lp_norm(u, std::numeric_limits<double>::infinity());
  return 0.4 * u.domain().min_spacing() / std::max(umax, 1e-8);
}

VelocityField convective_term(const VelocityField& u) {
  const DomainSpec& d = u.domain();
  VelocityField out(d);
  std::vector<double> du(u.size());
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      partial(d, u.component(a), unit_order(b), du);
      auto ub = u.component(b);
      auto oa = out.component(a);
      for (std::size_t i = 0; i < du.size(); ++i) oa[i] += ub[i] * du[i];
    }
  return out;
}

MomentumStep stokes_step(const VelocityField& u, const VelocityField& rhs, double dt,
                         const ModelParams& params) {
  check_finite_dt(dt);
  const DomainSpec& d = u.domain();
  VelocityField w = u;
  w.axpy(dt, rhs);
  const double coef = params.nu * dt;
  MomentumStep out;
  Projection proj;
  if (d.bc == BoundaryKind::Periodic) {
    auto& plan = spectral_plan(d);
    std::array<std::vector<Complex>, 3> what;
    const auto& sym = plan.laplacian_symbol();
    for (int a = 0; a < 3; ++a) {
      what[a] = plan.forward(w.component(a));
      for (std::size_t f = 0; f < sym.size(); ++f) what[a][f] /= 1.0 + coef * sym[f];
    }
    const auto phihat = project_spectra(plan, what);
    proj.velocity = VelocityField(d);
    proj.potential = ScalarField(d);
    for (int a = 0; a < 3; ++a) plan.inverse(what[a], proj.velocity.component(a));
    plan.inverse(phihat, proj.potential.component(0));
    proj.div_residual = periodic_div_residual(plan, what);
  } else {
    for (int a = 0; a < 3; ++a) helmholtz_solve(d, w.component(a), coef, WallCondition::Dirichlet);
    proj = box_project(w);
  }
  out.u = std::move(proj.velocity);
  out.p = std::move(proj.potential);
  out.p *= -1.0 / dt;
  out.report.div_residual = proj.div_residual;
  out.report.poisson_iters = proj.iterations;
  out.report.dt_used = dt;
  return out;
}

MomentumStep momentum_step(const VelocityField& u, const VelocityField& force, double dt,
                           const ModelParams& params) {
  check_finite_dt(dt);
  if (!(u.domain() == force.domain()))
    throw std::invalid_argument("momentum_step: force lives on a different domain");
  const double limit = advective_dt_limit(u);
  if (dt > limit) {
    std::ostringstream msg;
    msg << "advective CFL violated: dt " << dt << " > limit " << limit;
    throw StepRejected(msg.str(), limit);
  }
  VelocityField rhs = force;
  rhs -= convective_term(u);
  return stokes_step(u, rhs, dt, params);
}

}  // namespace qtf
