#include "qtf/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qtf/operators.hpp"

namespace qtf {

double kinetic_energy(const VelocityField& u) {
  const auto w = u.domain().quadrature_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * magnitude_sq(u, i);
  return 0.5 * s;
}

double landau_de_gennes_energy(const QTensorField& q, const ModelParams& params) {
  const DomainSpec& d = q.domain();
  const auto gq = grad(q, BoundaryRule::Mirror);
  const auto w = d.quadrature_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const QTensor qi = q_at(q, i);
    const double t2 = trace_sq(qi);
    const double grad_sq = magnitude_sq(gq[0], i) + magnitude_sq(gq[1], i) + magnitude_sq(gq[2], i);
    const double density = 0.5 * params.L * grad_sq + 0.5 * params.a * t2 -
                           params.b / 3.0 * trace_cub(qi) + 0.25 * params.c * t2 * t2;
    s += w[i] * density;
  }
  return s;
}

bool damping_condition_check(const ModelParams& params) {
  return params.a > 0.0 && params.c > 0.0 && params.a * params.c >= 9.0 / 16.0 * params.b * params.b;
}

double damping_rate_floor(const ModelParams& params) {
  return params.a - 9.0 * params.b * params.b / (16.0 * params.c);
}

double decay_rate_fit(std::span<const std::pair<double, double>> series, double tail_fraction) {
  if (series.size() < 8) throw std::invalid_argument("decay_rate_fit: need at least 8 samples");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw std::invalid_argument("decay_rate_fit: tail_fraction must be in (0, 1]");
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!(series[i].second > 0.0)) throw std::domain_error("decay_rate_fit: values must be positive");
    if (i > 0 && !(series[i].first > series[i - 1].first))
      throw std::invalid_argument("decay_rate_fit: times must be strictly increasing");
  }
  const std::size_t n = series.size();
  const std::size_t count = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n))));
  const std::size_t first = n - std::min(count, n);

  double tm = 0.0, ym = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    tm += series[i].first;
    ym += -std::log(series[i].second);
  }
  const double m = static_cast<double>(n - first);
  tm /= m;
  ym /= m;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double dt = series[i].first - tm;
    stt += dt * dt;
    sty += dt * (-std::log(series[i].second) - ym);
  }
  return sty / stt;
}

double energy_budget(const DiagnosticsRecord& prev, const DiagnosticsRecord& next, double dt) {
  return (next.total_energy() - prev.total_energy()) / dt;
}

double trace_residual(const QTensorField& q) {
  double m = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const QTensor qi = q_at(q, i);
    m = std::max(m, std::abs((qi[0] + qi[3]) + qi.q33()));
  }
  return m;
}

DiagnosticsRecord compute_diagnostics(const SimState& state, const ModelParams& params,
                                      double div_residual, bool with_monitor) {
  DiagnosticsRecord r;
  r.t = state.t;
  r.kinetic = kinetic_energy(state.u);
  r.lg_energy = landau_de_gennes_energy(state.Q, params);
  for (int p : {2, 4, 6}) r.q_lp_norms[p] = lp_norm(state.Q, p);
  r.div_residual = div_residual;
  r.monitor = with_monitor ? sobolev_monitor(state.u, state.Q, params) : 0.0;
  r.trace_residual = trace_residual(state.Q);
  return r;
}

void write_csv_header(std::ostream& os) {
  os << "t,kinetic,lg_energy,q_l2,q_l4,q_l6,div_residual,monitor\n";
}

void write_csv_row(std::ostream& os, const DiagnosticsRecord& rec) {
  auto norm = [&](int p) {
    const auto it = rec.q_lp_norms.find(p);
    return it == rec.q_lp_norms.end() ? 0.0 : it->second;
  };
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.t,
                rec.kinetic, rec.lg_energy, norm(2), norm(4), norm(6), rec.div_residual, rec.monitor);
  os << buf;
}

}  // namespace qtf
