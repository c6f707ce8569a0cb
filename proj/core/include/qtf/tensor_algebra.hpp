#pragma once

#include <array>

namespace qtf {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Coefficients of the Landau-de Gennes bulk potential and the transport
/// constants of the reduced (xi = 0) Beris-Edwards system.
struct ModelParams {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
  double L = 1.0;
  double nu = 1.0;
  double gamma = 1.0;
  double xi = 0.0;

  // Exponents used by the norm monitors.
  double p_exp = 16.0 / 15.0;
  double q_exp = 4.0;
  double r_exp = 15.0;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// A symmetric trace-free 3x3 tensor stored as its five independent
/// components (q11, q12, q13, q22, q23); q33 = -q11 - q22.
class QTensor {
 public:
  constexpr QTensor() = default;
  constexpr QTensor(double q11, double q12, double q13, double q22, double q23)
      : c_{q11, q12, q13, q22, q23} {}
  constexpr explicit QTensor(const std::array<double, 5>& c) : c_(c) {}

  /// diag(x, y, -x-y)
  static constexpr QTensor diagonal(double x, double y) { return {x, 0.0, 0.0, y, 0.0}; }

  constexpr const std::array<double, 5>& components() const { return c_; }
  constexpr double operator[](int k) const { return c_[k]; }
  constexpr double& operator[](int k) { return c_[k]; }

  constexpr double q33() const { return -c_[0] - c_[3]; }

  /// Entry (i, j) of the reconstructed matrix.
  constexpr double operator()(int i, int j) const {
    if (i > j) {
      const int t = i;
      i = j;
      j = t;
    }
    switch (i * 3 + j) {
      case 0: return c_[0];
      case 1: return c_[1];
      case 2: return c_[2];
      case 4: return c_[3];
      case 5: return c_[4];
      default: return q33();
    }
  }

  Mat3 matrix() const;

  QTensor& operator+=(const QTensor& o) {
    for (int k = 0; k < 5; ++k) c_[k] += o.c_[k];
    return *this;
  }
  QTensor& operator-=(const QTensor& o) {
    for (int k = 0; k < 5; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  QTensor& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  friend QTensor operator+(QTensor l, const QTensor& r) { return l += r; }
  friend QTensor operator-(QTensor l, const QTensor& r) { return l -= r; }
  friend QTensor operator*(double s, QTensor q) { return q *= s; }
  friend QTensor operator*(QTensor q, double s) { return q *= s; }
  friend bool operator==(const QTensor&, const QTensor&) = default;

 private:
  std::array<double, 5> c_{};
};

/// Weights that turn a sum of squares of the five stored components into the
/// squared Frobenius norm, excluding the q33 contribution.
inline constexpr std::array<double, 5> kOffDiagonalWeights = {1.0, 2.0, 2.0, 1.0, 2.0};

/// Symmetric trace-free part: (M + M^T)/2 - tr(M)/3 I.
QTensor sym_traceless_project(const Mat3& m);

/// tr(Q^2), equal to the squared Frobenius norm.
double trace_sq(const QTensor& q);
double trace_cub(const QTensor& q);

/// Frobenius inner product Q:P.
double contract(const QTensor& q, const QTensor& p);

/// -aQ + b[Q^2 - tr(Q^2)/3 I] - c Q tr(Q^2); the molecular field minus L*Lap(Q).
QTensor bulk_molecular_field(const QTensor& q, const ModelParams& params);

/// Q*DQ - DQ*Q (antisymmetric).
Mat3 commutator_stress(const QTensor& q, const QTensor& dq);

struct CubicTraceBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// tr(Q^3) <= (3 eps / 8) tr(Q^2)^2 + (3 / (2 eps)) tr(Q^2).
/// Throws std::domain_error when eps <= 0.
CubicTraceBound cubic_trace_bound_check(const QTensor& q, double eps);

/// (Omega Q - Q Omega) : Q. Zero for antisymmetric Omega and symmetric Q.
/// Throws std::domain_error when Omega is not antisymmetric.
double rotation_cancellation(const Mat3& omega, const QTensor& q);

double frobenius_norm(const Mat3& m);

}  // namespace qtf
