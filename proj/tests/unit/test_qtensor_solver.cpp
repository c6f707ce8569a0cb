#include <cmath>
#include <functional>

#include "doctest.h"
#include "qtf/errors.hpp"
#include "qtf/initial_conditions.hpp"
#include "qtf/qtensor_solver.hpp"
#include "support.hpp"

using namespace qtf;
using namespace qtf::test;

namespace {

DomainSpec periodic_2pi(int n) { return DomainSpec::cube(n, 2 * kPi, BoundaryKind::Periodic); }

QTensorField uniform_q(const DomainSpec& d, const QTensor& q) {
  return sample_q(d, q, [](double, double, double) { return 1.0; });
}

// Classical RK4 for dQ/dt = rhs(Q) on a single tensor.
QTensor rk4(QTensor q, double t_end, int steps, const std::function<QTensor(const QTensor&)>& rhs) {
  const double h = t_end / steps;
  for (int n = 0; n < steps; ++n) {
    const QTensor k1 = rhs(q);
    const QTensor k2 = rhs(q + (0.5 * h) * k1);
    const QTensor k3 = rhs(q + (0.5 * h) * k2);
    const QTensor k4 = rhs(q + h * k3);
    q += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return q;
}

// Swaps the x and y axes: Q -> P Q P^T, u -> P u, (x, y, z) -> (y, x, z).
QTensorField swap_xy(const QTensorField& q) {
  const DomainSpec& d = q.domain();
  QTensorField r(d);
  for (int k = 0; k < d.points(2); ++k)
    for (int j = 0; j < d.points(1); ++j)
      for (int i = 0; i < d.points(0); ++i) {
        const QTensor a = q_at(q, d.index(j, i, k));
        set_q(r, d.index(i, j, k), QTensor{a[3], a[1], a[4], a[0], a[2]});
      }
  return r;
}

VelocityField swap_xy(const VelocityField& u) {
  const DomainSpec& d = u.domain();
  VelocityField r(d);
  for (int k = 0; k < d.points(2); ++k)
    for (int j = 0; j < d.points(1); ++j)
      for (int i = 0; i < d.points(0); ++i) {
        const std::size_t src = d.index(j, i, k), dst = d.index(i, j, k);
        r(0, dst) = u(1, src);
        r(1, dst) = u(0, src);
        r(2, dst) = u(2, src);
      }
  return r;
}

}  // namespace

TEST_CASE("advect_q examples") {
  const DomainSpec d = periodic_2pi(16);
  const QTensor shape{0.3, -0.1, 0.2, 0.4, 0.5};
  const double k = 3.0, c = 0.7;
  const auto q = sample_q(d, shape, [&](double x, double, double) { return std::sin(k * x); });
  CHECK(max_abs(advect_q(q, VelocityField(d))) == 0.0);
  VelocityField u(d);
  std::fill(u.component(0).begin(), u.component(0).end(), c);
  const auto expected = sample_q(d, shape, [&](double x, double, double) { return -c * k * std::cos(k * x); });
  CHECK(max_abs_diff(advect_q(q, u), expected) <= 1e-12);
  CHECK(max_abs(advect_q(uniform_q(d, shape), random_smooth_u(d, 4, 1.0, 3))) <= 1e-12);
}

TEST_CASE("uniform Q follows the bulk ODE at first order") {
  const DomainSpec d = periodic_2pi(8);
  ModelParams p;
  p.a = 1, p.b = 0, p.c = 1, p.gamma = 1.3;
  const QTensor q0{0.4, 0.1, -0.2, 0.3, 0.25};
  const double t_end = 0.5;
  const QTensor ref = rk4(q0, t_end, 4000, [&](const QTensor& q) { return p.gamma * bulk_molecular_field(q, p); });
  double err[3];
  int idx = 0;
  for (int steps : {50, 100, 200}) {
    QTensorField q = uniform_q(d, q0);
    const double dt = t_end / steps;
    for (int n = 0; n < steps; ++n) q = q_step(q, VelocityField(d), dt, p);
    double e = 0.0;
    for (int c = 0; c < 5; ++c) e = std::max(e, std::abs(q(c, 5) - ref[c]));
    // Still spatially uniform.
    CHECK(max_abs_diff(q, uniform_q(d, q_at(q, 0))) <= 1e-14);
    err[idx++] = e;
  }
  CHECK(err[2] <= t_end / 200);
  CHECK(std::log2(err[0] / err[1]) >= 0.9);
  CHECK(std::log2(err[1] / err[2]) >= 0.9);

  // One step: local error O(dt^2).
  const double dt = 1e-3;
  const QTensorField one = q_step(uniform_q(d, q0), VelocityField(d), dt, p);
  const QTensor r1 = rk4(q0, dt, 100, [&](const QTensor& q) { return p.gamma * bulk_molecular_field(q, p); });
  for (int c = 0; c < 5; ++c) CHECK(std::abs(one(c, 0) - r1[c]) <= 5.0 * dt * dt);
}

TEST_CASE("backward Euler diffusion factor of a single mode") {
  const DomainSpec d = periodic_2pi(16);
  ModelParams p;
  p.a = 0, p.b = 0, p.c = 0, p.L = 0.8, p.gamma = 1.5;
  const QTensor shape{0.3, -0.1, 0.2, 0.4, 0.5};
  const double k = 2.0, dt = 0.01;
  const auto q = sample_q(d, shape, [&](double x, double, double) { return std::sin(k * x); });
  const auto next = q_step(q, VelocityField(d), dt, p);
  CHECK(max_abs_diff(next, (1.0 / (1.0 + p.gamma * p.L * k * k * dt)) * q) <= 1e-14);
}

TEST_CASE("zero Q is an equilibrium for any velocity") {
  for (auto bc : {BoundaryKind::Periodic, BoundaryKind::Box}) {
    const DomainSpec d = DomainSpec::cube(16, 1.0, bc);
    const auto u = random_smooth_u(d, 8, 0.5, 3);
    ModelParams p;
    p.b = 0.5;
    CHECK(max_abs(q_step(QTensorField(d), u, 1e-3, p)) == 0.0);
  }
}

TEST_CASE("L^p norms of Q do not increase under damping parameters") {
  ModelParams p;
  p.a = 1, p.b = 0.5, p.c = 1;
  for (auto bc : {BoundaryKind::Periodic, BoundaryKind::Box}) {
    const DomainSpec d = DomainSpec::cube(16, 2 * kPi, bc);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      QTensorField q = random_smooth_q(d, seed, 0.3 * static_cast<double>(seed), 3);
      for (int n = 0; n < 10; ++n) {
        const QTensorField next = q_step(q, VelocityField(d), 2e-3, p);
        for (double pp : {2.0, 4.0, 6.0}) CHECK(lp_norm(next, pp) <= lp_norm(q, pp));
        q = next;
      }
    }
  }
}

TEST_CASE("uniform Q stays uniform under advection") {
  const DomainSpec d = periodic_2pi(16);
  const auto u = random_smooth_u(d, 21, 0.5, 3);
  const QTensor q0{0.2, 0.1, 0.0, -0.1, 0.05};
  const auto next = q_step(uniform_q(d, q0), u, 1e-3, ModelParams{});
  CHECK(max_abs_diff(next, uniform_q(d, q_at(next, 0))) <= 1e-14);
}

TEST_CASE("q_step commutes with swapping two axes") {
  for (auto bc : {BoundaryKind::Periodic, BoundaryKind::Box}) {
    const DomainSpec d = DomainSpec::cube(16, 1.0, bc);
    const auto q = random_smooth_q(d, 31, 0.5, 3);
    const auto u = random_smooth_u(d, 32, 0.5, 3);
    ModelParams p;
    p.b = 0.7;
    const auto a = swap_xy(q_step(q, u, 1e-3, p));
    const auto b = q_step(swap_xy(q), swap_xy(u), 1e-3, p);
    CHECK(max_abs_diff(a, b) <= 1e-12);
  }
}

TEST_CASE("bulk stability limit and rejected steps") {
  const DomainSpec d = periodic_2pi(8);
  ModelParams p;
  p.a = 2, p.b = -1, p.c = 3, p.gamma = 0.5;
  const auto q = uniform_q(d, QTensor::diagonal(1, 1));
  const double m = std::sqrt(6.0);
  const double limit = 0.2 / (p.gamma * (2 + 1 * m + 3 * m * m) + 1e-8);
  CHECK(bulk_dt_limit(q, p) == doctest::Approx(limit).epsilon(1e-12));
  CHECK_THROWS_AS(q_step(q, VelocityField(d), 1.1 * limit, p), StepRejected);
  CHECK_NOTHROW(q_step(q, VelocityField(d), 0.9 * limit, p));
}

TEST_CASE("bulk_source matches the pointwise molecular field") {
  const DomainSpec d = periodic_2pi(8);
  const auto q = random_smooth_q(d, 3, 1.0, 2);
  ModelParams p;
  p.b = 0.4, p.gamma = 2.0;
  const auto s = bulk_source(q, p);
  for (std::size_t i = 0; i < d.size(); i += 7) {
    const QTensor h = p.gamma * bulk_molecular_field(q_at(q, i), p);
    for (int c = 0; c < 5; ++c) CHECK(s(c, i) == doctest::Approx(h[c]).epsilon(1e-14));
  }
}
