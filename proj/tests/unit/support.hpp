#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "qtf/field.hpp"
#include "qtf/operators.hpp"
#include "qtf/tensor_algebra.hpp"

namespace qtf::test {

inline constexpr double kPi = std::numbers::pi;

/// Small hand-rolled generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::pow(10.0, uniform(lo, hi)); }

  QTensor qtensor(double scale = 1.0) {
    QTensor q;
    for (int k = 0; k < 5; ++k) q[k] = scale * normal();
    return q;
  }

  Mat3 matrix(double scale = 1.0) {
    Mat3 m;
    for (auto& row : m)
      for (double& v : row) v = scale * normal();
    return m;
  }

  Mat3 antisymmetric(double scale = 1.0) {
    Mat3 m{};
    m[0][1] = scale * normal();
    m[0][2] = scale * normal();
    m[1][2] = scale * normal();
    m[1][0] = -m[0][1];
    m[2][0] = -m[0][2];
    m[2][1] = -m[1][2];
    return m;
  }

  Mat3 rotation() {
    double w = normal(), x = normal(), y = normal(), z = normal();
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n, x /= n, y /= n, z /= n;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Samples fn(x, y, z) -> std::array<double, N> at every grid point.
template <std::size_t N, class Fn>
Field<N> sample(const DomainSpec& d, Fn&& fn) {
  Field<N> f(d);
  for (int k = 0; k < d.points(2); ++k)
    for (int j = 0; j < d.points(1); ++j)
      for (int i = 0; i < d.points(0); ++i) {
        const std::array<double, N> v = fn(d.coordinate(0, i), d.coordinate(1, j), d.coordinate(2, k));
        for (std::size_t c = 0; c < N; ++c) f(c, d.index(i, j, k)) = v[c];
      }
  return f;
}

template <class Fn>
ScalarField sample_scalar(const DomainSpec& d, Fn&& fn) {
  return sample<1>(d, [&](double x, double y, double z) { return std::array<double, 1>{fn(x, y, z)}; });
}

/// Q(x) = g(x) * shape.
template <class Fn>
QTensorField sample_q(const DomainSpec& d, const QTensor& shape, Fn&& g) {
  return sample<5>(d, [&](double x, double y, double z) {
    const double s = g(x, y, z);
    return std::array<double, 5>{s * shape[0], s * shape[1], s * shape[2], s * shape[3], s * shape[4]};
  });
}

template <std::size_t N>
double max_abs_diff(const Field<N>& a, const Field<N>& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < N; ++c)
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a(c, i) - b(c, i)));
  return m;
}

template <std::size_t N>
double max_abs(const Field<N>& a) {
  double m = 0.0;
  for (std::size_t c = 0; c < N; ++c)
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a(c, i)));
  return m;
}

/// Max over interior nodes only (all of them for periodic grids).
template <std::size_t N>
double max_abs_interior(const Field<N>& a, int margin = 1) {
  const DomainSpec& d = a.domain();
  if (d.bc == BoundaryKind::Periodic) return max_abs(a);
  double m = 0.0;
  for (int k = margin; k < d.points(2) - margin; ++k)
    for (int j = margin; j < d.points(1) - margin; ++j)
      for (int i = margin; i < d.points(0) - margin; ++i)
        for (std::size_t c = 0; c < N; ++c) m = std::max(m, std::abs(a(c, d.index(i, j, k))));
  return m;
}

inline double matrix_entry_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

/// Fresh scratch directory under the system temp dir, removed on scope exit.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("qtf_test_" + tag + "_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace qtf::test
