#include "qtf/tensor_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtf {

void ModelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c), "a, b, c must be finite");
  require(c > 0.0, "c must be positive");
  require(L > 0.0, "L must be positive");
  require(nu > 0.0, "nu must be positive");
  require(gamma > 0.0, "gamma must be positive");
  require(xi == 0.0, "xi must be 0 (flow-alignment terms are not supported)");
  require(p_exp >= 1.0 && q_exp >= 1.0 && r_exp >= 1.0, "norm exponents must be >= 1");
}

Mat3 QTensor::matrix() const {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = (*this)(i, j);
  return m;
}

QTensor sym_traceless_project(const Mat3& m) {
  const double tr3 = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  return {m[0][0] - tr3, 0.5 * (m[0][1] + m[1][0]), 0.5 * (m[0][2] + m[2][0]), m[1][1] - tr3,
          0.5 * (m[1][2] + m[2][1])};
}

double trace_sq(const QTensor& q) {
  const double q33 = q.q33();
  return q[0] * q[0] + q[3] * q[3] + q33 * q33 + 2.0 * (q[1] * q[1] + q[2] * q[2] + q[4] * q[4]);
}

double trace_cub(const QTensor& q) {
  const Mat3 m = q.matrix();
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) s += m[i][j] * m[j][k] * m[k][i];
  return s;
}

double contract(const QTensor& q, const QTensor& p) {
  return q[0] * p[0] + q[3] * p[3] + q.q33() * p.q33() +
         2.0 * (q[1] * p[1] + q[2] * p[2] + q[4] * p[4]);
}

QTensor bulk_molecular_field(const QTensor& q, const ModelParams& params) {
  const Mat3 m = q.matrix();
  Mat3 sq{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[i][k] * m[k][j];
      sq[i][j] = s;
    }
  const double tr2 = sq[0][0] + sq[1][1] + sq[2][2];
  const QTensor q2{sq[0][0] - tr2 / 3.0, sq[0][1], sq[0][2], sq[1][1] - tr2 / 3.0, sq[1][2]};
  return -params.a * q + params.b * q2 - params.c * tr2 * q;
}

Mat3 commutator_stress(const QTensor& q, const QTensor& dq) {
  const Mat3 a = q.matrix();
  const Mat3 b = dq.matrix();
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j] - b[i][k] * a[k][j];
      out[i][j] = s;
    }
  return out;
}

CubicTraceBound cubic_trace_bound_check(const QTensor& q, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("cubic_trace_bound_check: eps must be positive");
  const double t2 = trace_sq(q);
  CubicTraceBound r;
  r.lhs = trace_cub(q);
  r.rhs = 3.0 * eps / 8.0 * t2 * t2 + 3.0 / (2.0 * eps) * t2;
  r.holds = r.lhs <= r.rhs + 1e-12 * std::max(1.0, std::abs(r.rhs));
  return r;
}

double frobenius_norm(const Mat3& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

double rotation_cancellation(const Mat3& omega, const QTensor& q) {
  double scale = 1.0;
  for (const auto& row : omega)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      if (std::abs(omega[i][j] + omega[j][i]) > 1e-14 * scale)
        throw std::domain_error("rotation_cancellation: Omega is not antisymmetric at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
  const Mat3 m = q.matrix();
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double r = 0.0;
      for (int k = 0; k < 3; ++k) r += omega[i][k] * m[k][j] - m[i][k] * omega[k][j];
      s += r * m[i][j];
    }
  return s;
}

}  // namespace qtf
