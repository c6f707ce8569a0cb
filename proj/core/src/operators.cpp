#include "qtf/operators.hpp"

#include <vector>

#include "qtf/parallel.hpp"
#include "qtf/spectral.hpp"

namespace qtf {

double magnitude_sq(const ScalarField& f, std::size_t idx) { return f(0, idx) * f(0, idx); }

double magnitude_sq(const VelocityField& f, std::size_t idx) {
  return f(0, idx) * f(0, idx) + f(1, idx) * f(1, idx) + f(2, idx) * f(2, idx);
}

double magnitude_sq(const QTensorField& f, std::size_t idx) { return trace_sq(q_at(f, idx)); }

double magnitude_sq(const MatrixField& f, std::size_t idx) {
  double s = 0.0;
  for (std::size_t c = 0; c < 9; ++c) s += f(c, idx) * f(c, idx);
  return s;
}

namespace {

int axis_stride(const DomainSpec& d, int axis) {
  return axis == 0 ? 1 : axis == 1 ? d.points(0) : d.points(0) * d.points(1);
}

template <class Kernel>
void for_each_line_point(const DomainSpec& d, int axis, Kernel&& kernel) {
  const int px = d.points(0), py = d.points(1), pz = d.points(2);
  parallel_for(pz, [&](int k) {
    for (int j = 0; j < py; ++j)
      for (int i = 0; i < px; ++i) {
        const int pos = axis == 0 ? i : axis == 1 ? j : k;
        kernel(d.index(i, j, k), pos);
      }
  });
}

void box_first(const DomainSpec& d, std::span<const double> f, int axis, std::span<double> out,
               BoundaryRule rule) {
  const std::size_t s = axis_stride(d, axis);
  const int last = d.points(axis) - 1;
  const double inv2h = 0.5 / d.spacing(axis);
  for_each_line_point(d, axis, [&](std::size_t idx, int pos) {
    if (pos == 0) {
      out[idx] = rule == BoundaryRule::Mirror
                     ? 0.0
                     : (-3.0 * f[idx] + 4.0 * f[idx + s] - f[idx + 2 * s]) * inv2h;
    } else if (pos == last) {
      out[idx] = rule == BoundaryRule::Mirror
                     ? 0.0
                     : (3.0 * f[idx] - 4.0 * f[idx - s] + f[idx - 2 * s]) * inv2h;
    } else {
      out[idx] = (f[idx + s] - f[idx - s]) * inv2h;
    }
  });
}

void box_second(const DomainSpec& d, std::span<const double> f, int axis, std::span<double> out,
                BoundaryRule rule) {
  const std::size_t s = axis_stride(d, axis);
  const int last = d.points(axis) - 1;
  const double h = d.spacing(axis);
  const double inv_h2 = 1.0 / (h * h);
  for_each_line_point(d, axis, [&](std::size_t idx, int pos) {
    if (pos == 0) {
      out[idx] = rule == BoundaryRule::Mirror
                     ? 2.0 * (f[idx + s] - f[idx]) * inv_h2
                     : (2.0 * f[idx] - 5.0 * f[idx + s] + 4.0 * f[idx + 2 * s] - f[idx + 3 * s]) *
                           inv_h2;
    } else if (pos == last) {
      out[idx] = rule == BoundaryRule::Mirror
                     ? 2.0 * (f[idx - s] - f[idx]) * inv_h2
                     : (2.0 * f[idx] - 5.0 * f[idx - s] + 4.0 * f[idx - 2 * s] - f[idx - 3 * s]) *
                           inv_h2;
    } else {
      out[idx] = (f[idx + s] - 2.0 * f[idx] + f[idx - s]) * inv_h2;
    }
  });
}

void spectral_partial(SpectralPlan& plan, std::span<const Complex> fhat,
                      const std::array<int, 3>& order, std::span<double> out) {
  // Symbol = i^m * prod_axis k_axis^order, m the total order.
  std::array<std::vector<double>, 3> r;
  int m = 0;
  for (int axis = 0; axis < 3; ++axis) {
    const auto& k = plan.wavenumber(axis);
    const auto& k2 = plan.wavenumber_sq(axis);
    r[axis].resize(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
      switch (order[axis]) {
        case 0: r[axis][i] = 1.0; break;
        case 1: r[axis][i] = k[i]; break;
        case 2: r[axis][i] = k2[i]; break;
        case 3: r[axis][i] = k[i] * k2[i]; break;
        default: throw std::invalid_argument("derivative order above 3");
      }
    }
    m += order[axis];
  }
  const DomainSpec& d = plan.domain();
  const int hx = plan.half_nx();
  auto buf = plan.spectral_buffer();
  std::size_t f = 0;
  for (int iz = 0; iz < d.nz; ++iz)
    for (int iy = 0; iy < d.ny; ++iy) {
      const double ryz = r[1][iy] * r[2][iz];
      for (int ix = 0; ix < hx; ++ix, ++f) {
        const double s = ryz * r[0][ix];
        const double re = fhat[f].real() * s, im = fhat[f].imag() * s;
        switch (m % 4) {
          case 0: buf[f] = Complex(re, im); break;
          case 1: buf[f] = Complex(-im, re); break;
          case 2: buf[f] = Complex(-re, -im); break;
          default: buf[f] = Complex(im, -re); break;
        }
      }
    }
  plan.inverse_from_buffer(out);
}

void box_partial(const DomainSpec& d, std::span<const double> f, std::array<int, 3> order,
                 std::span<double> out, BoundaryRule rule) {
  std::vector<double> cur(f.begin(), f.end());
  std::vector<double> next(f.size());
  for (int axis = 0; axis < 3; ++axis) {
    int m = order[axis];
    if (m < 0 || m > 3) throw std::invalid_argument("derivative order must be in [0, 3]");
    if (m >= 2) {
      box_second(d, cur, axis, next, rule);
      cur.swap(next);
      m -= 2;
    }
    if (m == 1) {
      box_first(d, cur, axis, next, rule);
      cur.swap(next);
    }
  }
  std::copy(cur.begin(), cur.end(), out.begin());
}

/// Ordered multi-indices of total order s as (order, multiplicity) pairs.
std::vector<std::pair<std::array<int, 3>, double>> multi_indices(int s) {
  std::vector<std::pair<std::array<int, 3>, double>> out;
  const double fact[4] = {1, 1, 2, 6};
  for (int a = 0; a <= s; ++a)
    for (int b = 0; a + b <= s; ++b) {
      const int c = s - a - b;
      out.push_back({{a, b, c}, fact[s] / (fact[a] * fact[b] * fact[c])});
    }
  return out;
}

}  // namespace

void partial(const DomainSpec& domain, std::span<const double> f, std::array<int, 3> order,
             std::span<double> out, BoundaryRule rule) {
  if (domain.bc == BoundaryKind::Periodic) {
    auto& plan = spectral_plan(domain);
    const auto fhat = plan.forward(f);
    spectral_partial(plan, fhat, order, out);
  } else {
    box_partial(domain, f, order, out, rule);
  }
}

void laplacian_component(const DomainSpec& domain, std::span<const double> f, std::span<double> out,
                         BoundaryRule rule) {
  if (domain.bc == BoundaryKind::Periodic) {
    auto& plan = spectral_plan(domain);
    auto fhat = plan.forward(f);
    const auto& sym = plan.laplacian_symbol();
    for (std::size_t i = 0; i < fhat.size(); ++i) fhat[i] *= -sym[i];
    plan.inverse(fhat, out);
    return;
  }
  std::vector<double> tmp(f.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (int axis = 0; axis < 3; ++axis) {
    box_second(domain, f, axis, tmp, rule);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] += tmp[i];
  }
}

VelocityField grad(const ScalarField& f, BoundaryRule rule) {
  VelocityField g(f.domain());
  for (int axis = 0; axis < 3; ++axis)
    partial(f.domain(), f.component(0), unit_order(axis), g.component(axis), rule);
  return g;
}

QTensorGradient grad(const QTensorField& q, BoundaryRule rule) {
  const DomainSpec& d = q.domain();
  QTensorGradient g{QTensorField(d), QTensorField(d), QTensorField(d)};
  if (d.bc == BoundaryKind::Periodic) {
    auto& plan = spectral_plan(d);
    for (std::size_t c = 0; c < 5; ++c) {
      const auto qhat = plan.forward(q.component(c));
      for (int axis = 0; axis < 3; ++axis)
        spectral_partial(plan, qhat, unit_order(axis), g[axis].component(c));
    }
    return g;
  }
  for (std::size_t c = 0; c < 5; ++c)
    for (int axis = 0; axis < 3; ++axis)
      box_first(d, q.component(c), axis, g[axis].component(c), rule);
  return g;
}

ScalarField div_vec(const VelocityField& u, BoundaryRule rule) {
  const DomainSpec& d = u.domain();
  ScalarField out(d);
  std::vector<double> tmp(u.size());
  for (int axis = 0; axis < 3; ++axis) {
    partial(d, u.component(axis), unit_order(axis), tmp, rule);
    for (std::size_t i = 0; i < tmp.size(); ++i) out(0, i) += tmp[i];
  }
  return out;
}

VelocityField div_mat(const MatrixField& t, BoundaryRule rule) {
  const DomainSpec& d = t.domain();
  VelocityField out(d);
  std::vector<double> tmp(t.size());
  for (int alpha = 0; alpha < 3; ++alpha)
    for (int beta = 0; beta < 3; ++beta) {
      partial(d, t.component(3 * alpha + beta), unit_order(beta), tmp, rule);
      for (std::size_t i = 0; i < tmp.size(); ++i) out(alpha, i) += tmp[i];
    }
  return out;
}

namespace {
template <std::size_t N>
Field<N> laplacian_impl(const Field<N>& f, BoundaryRule rule) {
  Field<N> out(f.domain());
  for (std::size_t c = 0; c < N; ++c)
    laplacian_component(f.domain(), f.component(c), out.component(c), rule);
  return out;
}
}  // namespace

ScalarField laplacian(const ScalarField& f, BoundaryRule rule) { return laplacian_impl(f, rule); }
VelocityField laplacian(const VelocityField& u, BoundaryRule rule) {
  return laplacian_impl(u, rule);
}
QTensorField laplacian(const QTensorField& q, BoundaryRule rule) { return laplacian_impl(q, rule); }

template <std::size_t N>
double derivative_lp_norm(const Field<N>& f, int order, double p, BoundaryRule rule) {
  if (order == 0) return lp_norm(f, p);
  const DomainSpec& d = f.domain();
  std::vector<double> mag(f.size(), 0.0);
  Field<N> deriv(d);
  std::array<std::vector<Complex>, N> spectra;
  if (d.bc == BoundaryKind::Periodic) {
    auto& plan = spectral_plan(d);
    for (std::size_t c = 0; c < N; ++c) spectra[c] = plan.forward(f.component(c));
  }
  for (const auto& [idx, mult] : multi_indices(order)) {
    for (std::size_t c = 0; c < N; ++c) {
      if (d.bc == BoundaryKind::Periodic)
        spectral_partial(spectral_plan(d), spectra[c], idx, deriv.component(c));
      else
        box_partial(d, f.component(c), idx, deriv.component(c), rule);
    }
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += mult * magnitude_sq(deriv, i);
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return std::sqrt(m);
  }
  const auto w = d.quadrature_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) s += w[i] * std::pow(mag[i], 0.5 * p);
  return std::pow(s, 1.0 / p);
}

template double derivative_lp_norm<1>(const Field<1>&, int, double, BoundaryRule);
template double derivative_lp_norm<3>(const Field<3>&, int, double, BoundaryRule);
template double derivative_lp_norm<5>(const Field<5>&, int, double, BoundaryRule);

double sobolev_monitor(const VelocityField& u, const QTensorField& q, const ModelParams& params) {
  if (!(u.domain() == q.domain())) throw std::invalid_argument("sobolev_monitor: domain mismatch");
  double m = 0.0;
  for (int s = 0; s <= 2; ++s) m += derivative_lp_norm(u, s, params.q_exp, BoundaryRule::OneSided);
  for (int s = 0; s <= 3; ++s) m += derivative_lp_norm(q, s, params.r_exp, BoundaryRule::Mirror);
  return m;
}

SimState apply_bcs(SimState state) {
  const DomainSpec& d = state.domain();
  if (d.bc != BoundaryKind::Box) return state;
  const int px = d.points(0), py = d.points(1), pz = d.points(2);
  for (int k = 0; k < pz; ++k)
    for (int j = 0; j < py; ++j)
      for (int i = 0; i < px; ++i)
        if (d.on_wall(i, j, k))
          for (std::size_t c = 0; c < 3; ++c) state.u(c, d.index(i, j, k)) = 0.0;

  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t s = axis_stride(d, axis);
    const int last = d.points(axis) - 1;
    for (int k = 0; k < pz; ++k)
      for (int j = 0; j < py; ++j)
        for (int i = 0; i < px; ++i) {
          const int pos = axis == 0 ? i : axis == 1 ? j : k;
          if (pos != 0 && pos != last) continue;
          const std::size_t idx = d.index(i, j, k);
          const std::size_t n1 = pos == 0 ? idx + s : idx - s;
          const std::size_t n2 = pos == 0 ? idx + 2 * s : idx - 2 * s;
          for (std::size_t c = 0; c < 5; ++c)
            state.Q(c, idx) = (4.0 * state.Q(c, n1) - state.Q(c, n2)) / 3.0;
        }
  }
  return state;
}

}  // namespace qtf
