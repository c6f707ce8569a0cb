#include "qtf/initial_conditions.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qtf/fluid_solver.hpp"
#include "qtf/operators.hpp"
#include "qtf/spectral.hpp"

namespace qtf {

namespace {

void fill_noise(std::mt19937_64& rng, std::span<double> data) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : data) v = normal(rng);
}

void lowpass_periodic(const DomainSpec& d, std::span<double> data, int cutoff) {
  auto& plan = spectral_plan(d);
  auto coeffs = plan.forward(data);
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    int ix, iy, iz;
    plan.mode(f, ix, iy, iz);
    const int m = std::max({std::abs(plan.signed_mode(0, ix)), std::abs(plan.signed_mode(1, iy)),
                            std::abs(plan.signed_mode(2, iz))});
    const bool nyquist = 2 * ix == d.nx || 2 * std::abs(plan.signed_mode(1, iy)) == d.ny ||
                         2 * std::abs(plan.signed_mode(2, iz)) == d.nz;
    if (m > cutoff || nyquist) coeffs[f] = 0.0;
  }
  plan.inverse(coeffs, data);
}

/// Cosine: all nodes, mode index m = i. Sine: interior nodes, m = i + 1.
void lowpass_box(const DomainSpec& d, std::span<double> data, int cutoff, TrigPlan::Kind kind) {
  auto& plan = trig_plan(d, kind);
  const auto& shape = plan.shape();
  const int off = kind == TrigPlan::Kind::Cosine ? 0 : 1;
  auto buf = plan.buffer();
  auto flat = [&](int i, int j, int k) {
    return i + static_cast<std::size_t>(shape[0]) * (j + static_cast<std::size_t>(shape[1]) * k);
  };
  for (int k = 0; k < shape[2]; ++k)
    for (int j = 0; j < shape[1]; ++j)
      for (int i = 0; i < shape[0]; ++i) buf[flat(i, j, k)] = data[d.index(i + off, j + off, k + off)];
  plan.execute();
  for (int k = 0; k < shape[2]; ++k)
    for (int j = 0; j < shape[1]; ++j)
      for (int i = 0; i < shape[0]; ++i) {
        const int m = std::max({i, j, k}) + off;
        buf[flat(i, j, k)] = m > cutoff ? 0.0 : buf[flat(i, j, k)] / plan.normalisation();
      }
  plan.execute();
  std::fill(data.begin(), data.end(), 0.0);
  for (int k = 0; k < shape[2]; ++k)
    for (int j = 0; j < shape[1]; ++j)
      for (int i = 0; i < shape[0]; ++i) data[d.index(i + off, j + off, k + off)] = buf[flat(i, j, k)];
}

template <std::size_t N>
void scale_to_max(Field<N>& f, double amplitude) {
  const double m = lp_norm(f, std::numeric_limits<double>::infinity());
  if (m > 0.0)
    f *= amplitude / m;
  else
    f.fill(0.0);
}

}  // namespace

QTensorField random_smooth_q(const DomainSpec& domain, std::uint64_t seed, double amplitude,
                             int cutoff_mode) {
  QTensorField q(domain);
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < 5; ++c) {
    fill_noise(rng, q.component(c));
    if (domain.bc == BoundaryKind::Periodic)
      lowpass_periodic(domain, q.component(c), cutoff_mode);
    else
      lowpass_box(domain, q.component(c), cutoff_mode, TrigPlan::Kind::Cosine);
  }
  scale_to_max(q, amplitude);
  return q;
}

VelocityField random_smooth_u(const DomainSpec& domain, std::uint64_t seed, double amplitude,
                              int cutoff_mode) {
  VelocityField u(domain);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  for (std::size_t c = 0; c < 3; ++c) {
    fill_noise(rng, u.component(c));
    if (domain.bc == BoundaryKind::Periodic)
      lowpass_periodic(domain, u.component(c), cutoff_mode);
    else
      lowpass_box(domain, u.component(c), cutoff_mode, TrigPlan::Kind::Sine);
  }
  if (amplitude == 0.0) return VelocityField(domain);
  u = leray_project(u).velocity;
  scale_to_max(u, amplitude);
  return u;
}

SimState make_initial_state(const RunConfig& config) {
  const DomainSpec& d = config.domain;
  SimState s = SimState::zero(d);
  if (const auto* sine = std::get_if<SineModeInit>(&config.initial_condition)) {
    const QTensor shape = (1.0 / std::sqrt(6.0)) * QTensor::diagonal(1.0, 1.0);
    const double l = d.length(sine->axis);
    for (int k = 0; k < d.points(2); ++k)
      for (int j = 0; j < d.points(1); ++j)
        for (int i = 0; i < d.points(0); ++i) {
          const int pos[3] = {i, j, k};
          const double x = d.coordinate(sine->axis, pos[sine->axis]);
          const double g = d.bc == BoundaryKind::Periodic
                               ? std::sin(2.0 * std::numbers::pi * sine->k * x / l)
                               : std::cos(std::numbers::pi * sine->k * x / l);
          set_q(s.Q, d.index(i, j, k), sine->amplitude * g * shape);
        }
  } else if (const auto* rnd = std::get_if<RandomSmoothInit>(&config.initial_condition)) {
    s.Q = random_smooth_q(d, rnd->seed, rnd->amplitude, rnd->cutoff_mode);
    s.u = random_smooth_u(d, rnd->seed, rnd->velocity_amplitude.value_or(rnd->amplitude),
                          rnd->cutoff_mode);
  }
  return s;
}

}  // namespace qtf
