#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qtf/coupled_stepper.hpp"
#include "qtf/diagnostics.hpp"
#include "qtf/initial_conditions.hpp"
#include "support.hpp"

using namespace qtf;
using namespace qtf::test;

namespace {

DomainSpec unit_periodic(int n) { return DomainSpec::cube(n, 1.0, BoundaryKind::Periodic); }

std::vector<std::pair<double, double>> exponential(double amp, double rate, int n, double t0 = 0.0, double dt = 1.0) {
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + i * dt;
    s.emplace_back(t, amp * std::exp(-rate * t));
  }
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("Landau-de Gennes energy examples") {
  for (auto bc : {BoundaryKind::Periodic, BoundaryKind::Box}) {
    const DomainSpec d = DomainSpec::cube(8, 1.0, bc);
    CHECK(landau_de_gennes_energy(QTensorField(d), ModelParams{}) == 0.0);
    const auto q = sample_q(d, QTensor::diagonal(1, 1), [](double, double, double) { return 1.0; });
    ModelParams p;
    p.a = 1, p.b = 0, p.c = 1, p.L = 3.7;
    CHECK(landau_de_gennes_energy(q, p) == doctest::Approx(12.0).epsilon(1e-13));
    p.a = 0, p.b = 3, p.c = 0;
    CHECK(landau_de_gennes_energy(q, p) == doctest::Approx(6.0).epsilon(1e-13));
  }
}

TEST_CASE("gradient part of the energy for a single mode") {
  // (L/2) int |grad Q|^2 for Q = sin(2 pi x) Qhat on the unit cube = (L/4)(2 pi)^2 |Qhat|^2.
  const DomainSpec d = unit_periodic(16);
  ModelParams p;
  p.a = 0, p.b = 0, p.c = 0, p.L = 0.9;
  const QTensor shape{0.3, -0.2, 0.1, 0.4, 0.25};
  const auto q = sample_q(d, shape, [](double x, double, double) { return std::sin(2 * kPi * x); });
  const double expected = p.L / 4.0 * 4 * kPi * kPi * trace_sq(shape);
  CHECK(landau_de_gennes_energy(q, p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("energy is positive definite for a, c > 0 and b = 0") {
  Gen g(42);
  ModelParams p;
  p.b = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    p.a = g.uniform(0.01, 2.0);
    p.c = g.uniform(0.01, 2.0);
    const DomainSpec d = DomainSpec::cube(8, 1.0, trial % 2 ? BoundaryKind::Box : BoundaryKind::Periodic);
    QTensorField q(d);
    for (std::size_t c = 0; c < 5; ++c)
      for (double& v : q.component(c)) v = g.normal() * g.log_uniform(-3, 1);
    CHECK(landau_de_gennes_energy(q, p) > 0.0);
  }
}

TEST_CASE("kinetic energy") {
  const DomainSpec d = unit_periodic(8);
  VelocityField u(d);
  std::fill(u.component(0).begin(), u.component(0).end(), 1.0);
  std::fill(u.component(1).begin(), u.component(1).end(), 2.0);
  std::fill(u.component(2).begin(), u.component(2).end(), -2.0);
  CHECK(kinetic_energy(u) == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(kinetic_energy(VelocityField(d)) == 0.0);
}

TEST_CASE("damping condition") {
  auto params = [](double a, double b, double c) {
    ModelParams p;
    p.a = a, p.b = b, p.c = c;
    return p;
  };
  CHECK(damping_condition_check(params(1, 0, 1)));
  CHECK(damping_condition_check(params(1, 1, 1)));
  CHECK_FALSE(damping_condition_check(params(0.1, 1, 1)));
  CHECK_FALSE(damping_condition_check(params(0, 0, 1)));
  CHECK_FALSE(damping_condition_check(params(-1, 0, 1)));
  CHECK_FALSE(damping_condition_check(params(1, 0, 0)));
  CHECK(damping_condition_check(params(9.0 / 16.0, 1, 1)));
  CHECK(damping_rate_floor(params(1, 0.5, 1)) == doctest::Approx(0.859375));
  CHECK(damping_rate_floor(params(1, 1, 1)) == doctest::Approx(7.0 / 16.0));
}

TEST_CASE("decay_rate_fit") {
  const auto e = exponential(2.0, 0.5, 8);
  CHECK(std::abs(decay_rate_fit(e) - 0.5) <= 1e-12);
  CHECK(std::abs(decay_rate_fit(e, 1.0) - 0.5) <= 1e-12);
  Gen g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double rate = g.uniform(-3, 3);
    const auto s = exponential(g.log_uniform(-3, 3), rate, g.integer(8, 200), g.uniform(0, 5), g.uniform(1e-3, 0.1));
    CHECK(std::abs(decay_rate_fit(s) - rate) <= 1e-12 * (1.0 + std::abs(rate)) * 100);
  }
  std::vector<std::pair<double, double>> flat;
  for (int i = 0; i < 10; ++i) flat.emplace_back(i, 3.0);
  CHECK(decay_rate_fit(flat) == 0.0);

  // Only the tail half enters the default fit.
  auto kinked = exponential(1.0, 5.0, 20);
  for (std::size_t i = 10; i < 20; ++i) kinked[i].second = kinked[9].second * std::exp(-1.0 * (kinked[i].first - 9));
  CHECK(decay_rate_fit(kinked) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(decay_rate_fit(exponential(1, 1, 7)), std::invalid_argument);
  auto neg = exponential(1, 1, 10);
  neg[3].second = 0.0;
  CHECK_THROWS_AS(decay_rate_fit(neg), std::domain_error);
  neg[3].second = -1.0;
  CHECK_THROWS_AS(decay_rate_fit(neg), std::domain_error);
  auto unordered = exponential(1, 1, 10);
  std::swap(unordered[2].first, unordered[3].first);
  CHECK_THROWS_AS(decay_rate_fit(unordered), std::invalid_argument);
  CHECK_THROWS_AS(decay_rate_fit(e, 0.0), std::invalid_argument);
}

TEST_CASE("energy_budget") {
  DiagnosticsRecord a, b;
  CHECK(energy_budget(a, b, 0.1) == 0.0);
  a.kinetic = 1.0, a.lg_energy = 2.0;
  b.kinetic = 0.5, b.lg_energy = 2.25;
  CHECK(energy_budget(a, b, 0.5) == doctest::Approx(-0.5));
}

TEST_CASE("Taylor-Green energy budget matches enstrophy dissipation") {
  // One Fourier shell with k^2 = 2: dE/dt = -2 nu k^2 E.
  const DomainSpec d = DomainSpec::cube(16, 2 * kPi, BoundaryKind::Periodic);
  ModelParams p;
  p.nu = 0.5;
  SimState s = SimState::zero(d);
  s.u = sample<3>(d, [](double x, double y, double) {
    return std::array<double, 3>{0.3 * std::sin(x) * std::cos(y), -0.3 * std::cos(x) * std::sin(y), 0.0};
  });
  double prev_err = 0.0;
  for (double dt : {2e-3, 1e-3}) {
    const DiagnosticsRecord r0 = compute_diagnostics(s, p, 0.0, false);
    const StepResult r = step(s, dt, p, {.with_monitor = false});
    const double rate = energy_budget(r0, r.record, dt) / r0.total_energy();
    const double err = std::abs(rate + 2 * p.nu * 2.0);
    CHECK(err <= 10 * dt);
    if (prev_err > 0.0) CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("compute_diagnostics and trace residual") {
  const DomainSpec d = unit_periodic(16);
  SimState s = SimState::zero(d);
  const DiagnosticsRecord z = compute_diagnostics(s, ModelParams{}, 0.0);
  CHECK(z.kinetic == 0.0);
  CHECK(z.lg_energy == 0.0);
  CHECK(z.monitor == 0.0);
  CHECK(z.q_lp_norms.size() == 3);
  for (const auto& [p, v] : z.q_lp_norms) CHECK(v == 0.0);

  s.Q = random_smooth_q(d, 5, 0.7, 3);
  s.u = random_smooth_u(d, 5, 0.2, 3);
  s.t = 0.25;
  const DiagnosticsRecord r = compute_diagnostics(s, ModelParams{}, 3e-15);
  CHECK(r.t == 0.25);
  CHECK(r.div_residual == 3e-15);
  CHECK(r.trace_residual == 0.0);
  CHECK(trace_residual(s.Q) == 0.0);
  CHECK(r.q_lp_norms.at(2) == doctest::Approx(lp_norm(s.Q, 2.0)));
  CHECK(r.q_lp_norms.at(6) == doctest::Approx(lp_norm(s.Q, 6.0)));
  CHECK(r.kinetic == doctest::Approx(kinetic_energy(s.u)));
  CHECK(r.monitor == doctest::Approx(sobolev_monitor(s.u, s.Q, ModelParams{})));
  CHECK(compute_diagnostics(s, ModelParams{}, 0.0, false).monitor == 0.0);
}

TEST_CASE("CSV header and rows carry 17 significant digits") {
  std::ostringstream os;
  write_csv_header(os);
  CHECK(os.str() == "t,kinetic,lg_energy,q_l2,q_l4,q_l6,div_residual,monitor\n");

  Gen g(11);
  for (int trial = 0; trial < 100; ++trial) {
    DiagnosticsRecord r;
    r.t = g.uniform(0, 10);
    r.kinetic = g.log_uniform(-20, 5);
    r.lg_energy = g.normal() * g.log_uniform(-20, 5);
    r.q_lp_norms = {{2, g.log_uniform(-5, 2)}, {4, g.log_uniform(-5, 2)}, {6, g.log_uniform(-5, 2)}};
    r.div_residual = g.log_uniform(-20, -10);
    r.monitor = g.log_uniform(-3, 3);
    std::ostringstream row;
    write_csv_row(row, r);
    const std::string line = row.str();
    REQUIRE(line.back() == '\n');
    const auto cells = split(line.substr(0, line.size() - 1));
    REQUIRE(cells.size() == 8);
    const double values[8] = {r.t, r.kinetic, r.lg_energy, r.q_lp_norms[2], r.q_lp_norms[4], r.q_lp_norms[6],
                              r.div_residual, r.monitor};
    for (int i = 0; i < 8; ++i) CHECK(std::strtod(cells[i].c_str(), nullptr) == values[i]);
  }
}
