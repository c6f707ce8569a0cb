#include "qtf/verification.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qtf/fluid_solver.hpp"
#include "qtf/initial_conditions.hpp"
#include "qtf/operators.hpp"
#include "qtf/tensor_algebra.hpp"

namespace qtf {

namespace {

using Clock = std::chrono::steady_clock;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }

  /// 10^U(lo, hi)
  double log_uniform(double lo, double hi) {
    return std::pow(10.0, std::uniform_real_distribution<double>(lo, hi)(rng_));
  }

  QTensor qtensor(double scale) {
    QTensor q;
    for (int k = 0; k < 5; ++k) q[k] = scale * normal();
    return q;
  }

  Mat3 matrix(double scale) {
    Mat3 m;
    for (auto& row : m)
      for (double& v : row) v = scale * normal();
    return m;
  }

  Mat3 antisymmetric(double scale) {
    Mat3 m{};
    m[0][1] = scale * normal();
    m[0][2] = scale * normal();
    m[1][2] = scale * normal();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < i; ++j) m[i][j] = -m[j][i];
    return m;
  }

  /// Uniform random rotation from a normalised Gaussian quaternion.
  Mat3 rotation() {
    double w = normal(), x = normal(), y = normal(), z = normal();
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n, x /= n, y /= n, z /= n;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

CheckResult finish(std::string name, bool passed, const std::ostringstream& detail, Clock::time_point t0) {
  return {std::move(name), passed, detail.str(),
          std::chrono::duration<double>(Clock::now() - t0).count()};
}

}  // namespace

CheckResult check_cubic_trace_bound(std::size_t samples, std::uint64_t seed) {
  const auto t0 = Clock::now();
  Sampler s(seed);
  std::vector<double> eps;
  for (int k = 0; k <= 12; ++k) eps.push_back(std::pow(10.0, -3.0 + 0.5 * k));

  std::size_t failures = 0;
  double min_slack = INFINITY;  // (rhs - lhs) / rhs
  for (std::size_t n = 0; n < samples; ++n) {
    const QTensor q = s.qtensor(s.log_uniform(-3.0, 3.0));
    for (double e : eps) {
      const CubicTraceBound b = cubic_trace_bound_check(q, e);
      if (!(b.lhs <= b.rhs + 1e-12 * std::abs(b.rhs))) ++failures;
      if (b.rhs > 0.0) min_slack = std::min(min_slack, (b.rhs - b.lhs) / b.rhs);
    }
  }
  std::ostringstream d;
  d << samples << " tensors x " << eps.size() << " eps, " << failures
    << " violations, min relative slack " << min_slack;
  return finish("cubic trace bound", failures == 0, d, t0);
}

CheckResult check_rotation_cancellation(std::size_t samples, std::uint64_t seed) {
  const auto t0 = Clock::now();
  Sampler s(seed);
  std::size_t failures = 0;
  double worst = 0.0;  // |value| / (|Omega| |Q|^2)
  for (std::size_t n = 0; n < samples; ++n) {
    const Mat3 omega = s.antisymmetric(s.log_uniform(-3.0, 3.0));
    const QTensor q = s.qtensor(s.log_uniform(-3.0, 3.0));
    const double value = rotation_cancellation(omega, q);
    const double scale = frobenius_norm(omega) * trace_sq(q);
    const double rel = scale > 0.0 ? std::abs(value) / scale : std::abs(value);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-13)) ++failures;
  }
  std::ostringstream d;
  d << samples << " pairs, " << failures << " violations, worst ratio " << worst;
  return finish("rotation cancellation", failures == 0, d, t0);
}

CheckResult check_trace_eigen_oracle(std::size_t samples, std::uint64_t seed) {
  const auto t0 = Clock::now();
  Sampler s(seed);
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double scale = s.log_uniform(-3.0, 3.0);
    const double l1 = scale * s.normal(), l2 = scale * s.normal(), l3 = -l1 - l2;
    const Mat3 r = s.rotation();
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m[i][j] = r[i][0] * l1 * r[j][0] + r[i][1] * l2 * r[j][1] + r[i][2] * l3 * r[j][2];
    const QTensor q = sym_traceless_project(m);
    const double lmax = std::max({std::abs(l1), std::abs(l2), std::abs(l3)});
    const double e2 = std::abs(trace_sq(q) - (l1 * l1 + l2 * l2 + l3 * l3)) / (lmax * lmax);
    const double e3 = std::abs(trace_cub(q) - (l1 * l1 * l1 + l2 * l2 * l2 + l3 * l3 * l3)) /
                      (lmax * lmax * lmax);
    worst = std::max({worst, e2, e3});
    if (!(e2 <= 1e-12 && e3 <= 1e-12)) ++failures;
  }
  std::ostringstream d;
  d << samples << " rotated spectra, " << failures << " mismatches, worst scaled error " << worst;
  return finish("trace powers vs eigenvalues", failures == 0, d, t0);
}

CheckResult check_projection_identities(std::size_t samples, std::uint64_t seed) {
  const auto t0 = Clock::now();
  Sampler s(seed);
  std::size_t failures = 0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double scale = s.log_uniform(-3.0, 3.0);
    const QTensor q = s.qtensor(scale);
    const QTensor back = sym_traceless_project(q.matrix());
    bool ok = true;
    for (int k = 0; k < 5; ++k) ok = ok && std::abs(back[k] - q[k]) <= 1e-15 * scale * 8;

    const Mat3 m = s.matrix(scale);
    const QTensor p = sym_traceless_project(m);
    const double tr = m[0][0] + m[1][1] + m[2][2];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double expect = 0.5 * (m[i][j] + m[j][i]) - (i == j ? tr / 3.0 : 0.0);
        ok = ok && std::abs(p(i, j) - expect) <= 1e-14 * scale * 8;
      }

    const Mat3 c = commutator_stress(q, s.qtensor(scale));
    const double cn = frobenius_norm(c);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ok = ok && std::abs(c[i][j] + c[j][i]) <= 1e-15 * cn;
    if (!ok) ++failures;
  }
  std::ostringstream d;
  d << samples << " samples, " << failures << " failures";
  return finish("projection and commutator identities", failures == 0, d, t0);
}

CheckResult check_operator_identities(std::uint64_t seed) {
  const auto t0 = Clock::now();
  std::ostringstream d;
  bool ok = true;

  const DomainSpec periodic = DomainSpec::cube(16, 2.0 * std::numbers::pi, BoundaryKind::Periodic);
  const QTensorField noise = random_smooth_q(periodic, seed, 1.0, 4);

  ScalarField f(periodic);
  std::copy(noise.component(0).begin(), noise.component(0).end(), f.component(0).begin());
  ScalarField lap = laplacian(f);
  const double lap_err = lp_norm(div_vec(grad(f)) - lap, 2.0) / lp_norm(lap, 2.0);
  ok = ok && lap_err <= 1e-10;
  d << "periodic div(grad f) vs Lap f " << lap_err;

  VelocityField u(periodic);
  for (std::size_t c = 0; c < 3; ++c)
    std::copy(noise.component(c + 1).begin(), noise.component(c + 1).end(), u.component(c).begin());
  const VelocityField pu = leray_project(u).velocity;
  const VelocityField ppu = leray_project(pu).velocity;
  const double idem = lp_norm(ppu - pu, 2.0) / lp_norm(pu, 2.0);
  const double div_p = divergence_residual(pu);
  ok = ok && idem <= 1e-12 && div_p <= 1e-12;
  d << "; periodic Leray idempotence " << idem << ", divergence " << div_p;

  const DomainSpec box = DomainSpec::cube(16, 1.0, BoundaryKind::Box);
  const VelocityField ub = random_smooth_u(box, seed, 1.0, 4);
  const double div_b = divergence_residual(ub);
  ok = ok && div_b <= 1e-10;
  d << "; box projected divergence " << div_b;

  return finish("operator identities", ok, d, t0);
}

std::vector<CheckResult> run_verification(std::ostream* log) {
  std::vector<CheckResult> out;
  auto run = [&](CheckResult r) {
    if (log) *log << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " (" << r.seconds << " s)\n";
    out.push_back(std::move(r));
  };
  run(check_cubic_trace_bound());
  run(check_rotation_cancellation());
  run(check_trace_eigen_oracle());
  run(check_projection_identities());
  run(check_operator_identities());
  return out;
}

}  // namespace qtf
