#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qtf/domain.hpp"
#include "qtf/tensor_algebra.hpp"

namespace qtf {

/// Grid-sampled field with N real components stored component-major, each
/// component laid out x fastest.
template <std::size_t N>
class Field {
 public:
  static constexpr std::size_t kComponents = N;

  Field() = default;
  explicit Field(const DomainSpec& domain) : domain_(domain) {
    for (auto& c : data_) c.assign(domain.size(), 0.0);
  }

  const DomainSpec& domain() const { return domain_; }
  std::size_t size() const { return data_[0].size(); }

  std::span<double> component(std::size_t c) { return data_[c]; }
  std::span<const double> component(std::size_t c) const { return data_[c]; }

  double& operator()(std::size_t c, std::size_t idx) { return data_[c][idx]; }
  double operator()(std::size_t c, std::size_t idx) const { return data_[c][idx]; }

  Field& operator+=(const Field& o) {
    for (std::size_t c = 0; c < N; ++c)
      for (std::size_t i = 0; i < size(); ++i) data_[c][i] += o.data_[c][i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::size_t c = 0; c < N; ++c)
      for (std::size_t i = 0; i < size(); ++i) data_[c][i] -= o.data_[c][i];
    return *this;
  }
  Field& operator*=(double s) {
    for (auto& comp : data_)
      for (double& v : comp) v *= s;
    return *this;
  }
  /// this += s * o
  Field& axpy(double s, const Field& o) {
    for (std::size_t c = 0; c < N; ++c)
      for (std::size_t i = 0; i < size(); ++i) data_[c][i] += s * o.data_[c][i];
    return *this;
  }
  void fill(double v) {
    for (auto& comp : data_) std::fill(comp.begin(), comp.end(), v);
  }

  friend Field operator+(Field l, const Field& r) { return l += r; }
  friend Field operator-(Field l, const Field& r) { return l -= r; }
  friend Field operator*(double s, Field f) { return f *= s; }
  friend bool operator==(const Field&, const Field&) = default;

 private:
  DomainSpec domain_{};
  std::array<std::vector<double>, N> data_{};
};

using ScalarField = Field<1>;
using VelocityField = Field<3>;
/// Components (q11, q12, q13, q22, q23) per point.
using QTensorField = Field<5>;
/// Row-major 3x3 matrix per point: component 3*alpha + beta.
using MatrixField = Field<9>;

inline QTensor q_at(const QTensorField& f, std::size_t idx) {
  return {f(0, idx), f(1, idx), f(2, idx), f(3, idx), f(4, idx)};
}
inline void set_q(QTensorField& f, std::size_t idx, const QTensor& q) {
  for (std::size_t c = 0; c < 5; ++c) f(c, idx) = q[static_cast<int>(c)];
}

/// Pointwise magnitude squared: |.|^2, Euclidean for vectors, Frobenius for
/// tensors (q33 reconstructed for Q fields).
double magnitude_sq(const ScalarField& f, std::size_t idx);
double magnitude_sq(const VelocityField& f, std::size_t idx);
double magnitude_sq(const QTensorField& f, std::size_t idx);
double magnitude_sq(const MatrixField& f, std::size_t idx);

}  // namespace qtf
