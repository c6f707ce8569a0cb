#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "qtf/field.hpp"
#include "qtf/state.hpp"

namespace qtf {

// Discrete differential operators. Periodic domains use spectral
// differentiation (Nyquist dropped for odd derivatives); Box domains use
// second-order centred differences. On Box walls the rule selects either
// second-order one-sided stencils or mirror ghosts (homogeneous Neumann).
enum class BoundaryRule { OneSided, Mirror };

/// Partial derivative d^{order[0]}_x d^{order[1]}_y d^{order[2]}_z of one
/// component; each order in [0, 3].
void partial(const DomainSpec& domain, std::span<const double> f, std::array<int, 3> order,
             std::span<double> out, BoundaryRule rule = BoundaryRule::OneSided);

inline std::array<int, 3> unit_order(int axis, int times = 1) {
  std::array<int, 3> o{0, 0, 0};
  o[axis] = times;
  return o;
}

void laplacian_component(const DomainSpec& domain, std::span<const double> f, std::span<double> out,
                         BoundaryRule rule = BoundaryRule::OneSided);

/// d_gamma Q for gamma = x, y, z.
using QTensorGradient = std::array<QTensorField, 3>;

VelocityField grad(const ScalarField& f, BoundaryRule rule = BoundaryRule::OneSided);
QTensorGradient grad(const QTensorField& q, BoundaryRule rule = BoundaryRule::Mirror);

ScalarField div_vec(const VelocityField& u, BoundaryRule rule = BoundaryRule::OneSided);
/// (div T)_alpha = d_beta T_{alpha beta}.
VelocityField div_mat(const MatrixField& t, BoundaryRule rule = BoundaryRule::OneSided);

ScalarField laplacian(const ScalarField& f, BoundaryRule rule = BoundaryRule::OneSided);
VelocityField laplacian(const VelocityField& u, BoundaryRule rule = BoundaryRule::OneSided);
QTensorField laplacian(const QTensorField& q, BoundaryRule rule = BoundaryRule::Mirror);

/// (sum |f|^p w)^{1/p} with quadrature weights w, or max |f| for p = inf.
/// Throws std::domain_error for p < 1.
template <std::size_t N>
double lp_norm(const Field<N>& f, double p) {
  if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1 or infinity");
  const std::size_t n = f.size();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = magnitude_sq(f, i);
      if (std::isnan(v)) return v;
      m = std::max(m, v);
    }
    return std::sqrt(m);
  }
  const auto w = f.domain().quadrature_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m2 = magnitude_sq(f, i);
    s += w[i] * (p == 2.0 ? m2 : std::pow(m2, 0.5 * p));
  }
  return std::pow(s, 1.0 / p);
}

/// L^p norm of the pointwise Frobenius magnitude of the s-th derivative
/// tensor: |grad^s f|^2 = sum over all ordered index tuples.
template <std::size_t N>
double derivative_lp_norm(const Field<N>& f, int order, double p, BoundaryRule rule);

/// ||u||_q + ||grad u||_q + ||grad^2 u||_q + sum_{s=0..3} ||grad^s Q||_r with
/// q = params.q_exp, r = params.r_exp. An integer-order stand-in for the
/// fractional / Besov norms of the continuous theory.
double sobolev_monitor(const VelocityField& u, const QTensorField& q, const ModelParams& params);

/// Box: zero the wall velocity and set each wall Q value so the second-order
/// one-sided normal derivative vanishes. Periodic: returns the state unchanged.
SimState apply_bcs(SimState state);

}  // namespace qtf
