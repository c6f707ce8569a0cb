#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "qtf/domain.hpp"

namespace qtf {

using Complex = std::complex<double>;

/// Real-to-complex 3-D FFT on a periodic domain. The half-length axis is x;
/// mode (ix, iy, iz) lives at ix + (nx/2+1)*(iy + ny*iz).
///
/// An instance owns FFTW plans and scratch buffers, so it must not be shared
/// between threads; use spectral_plan() for a per-thread cached instance.
class SpectralPlan {
 public:
  explicit SpectralPlan(const DomainSpec& domain);
  ~SpectralPlan();
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;

  const DomainSpec& domain() const { return domain_; }
  std::size_t real_size() const { return domain_.size(); }
  std::size_t spectral_size() const { return spectral_size_; }
  int half_nx() const { return domain_.nx / 2 + 1; }

  void forward(std::span<const double> in, std::span<Complex> out);
  /// Includes the 1/N normalisation.
  void inverse(std::span<const Complex> in, std::span<double> out);

  /// Scratch spectral buffer; fill it and call inverse_from_buffer() to
  /// skip one copy. Overwritten by forward() and inverse().
  std::span<Complex> spectral_buffer() { return {cplx_buf_, spectral_size_}; }
  void inverse_from_buffer(std::span<double> out);

  std::vector<Complex> forward(std::span<const double> in) {
    std::vector<Complex> out(spectral_size_);
    forward(in, out);
    return out;
  }

  /// Wavenumber used for first derivatives (Nyquist entry zeroed).
  const std::vector<double>& wavenumber(int axis) const { return k_[axis]; }
  /// Wavenumber squared used for second derivatives (Nyquist retained).
  const std::vector<double>& wavenumber_sq(int axis) const { return k2_[axis]; }
  /// k^2 = kx^2 + ky^2 + kz^2 at a flat spectral index.
  const std::vector<double>& laplacian_symbol() const { return lap_; }

  /// Mode coordinates of a flat spectral index.
  void mode(std::size_t flat, int& ix, int& iy, int& iz) const {
    const int hx = half_nx();
    ix = static_cast<int>(flat % hx);
    const std::size_t rest = flat / hx;
    iy = static_cast<int>(rest % domain_.ny);
    iz = static_cast<int>(rest / domain_.ny);
  }

  /// Signed integer mode number along an axis (x is never negative).
  int signed_mode(int axis, int index) const;

 private:
  DomainSpec domain_;
  std::size_t spectral_size_ = 0;
  double* real_buf_ = nullptr;
  Complex* cplx_buf_ = nullptr;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
  std::vector<double> k_[3];
  std::vector<double> k2_[3];
  std::vector<double> lap_;
};

/// Cached per thread and per domain.
SpectralPlan& spectral_plan(const DomainSpec& domain);

/// Real-to-real 3-D transforms diagonalising the Box-grid second-difference
/// operators: a DCT-I over all nodes (mirror / Neumann walls) or a DST-I over
/// the interior nodes (homogeneous Dirichlet walls).
class TrigPlan {
 public:
  enum class Kind { Cosine, Sine };

  TrigPlan(const DomainSpec& domain, Kind kind);
  ~TrigPlan();
  TrigPlan(const TrigPlan&) = delete;
  TrigPlan& operator=(const TrigPlan&) = delete;

  Kind kind() const { return kind_; }
  /// Transform shape: points per axis (Cosine) or interior points (Sine).
  const std::array<int, 3>& shape() const { return shape_; }
  std::size_t size() const { return static_cast<std::size_t>(shape_[0]) * shape_[1] * shape_[2]; }

  /// Unnormalised in-place transform of the scratch buffer.
  std::span<double> buffer() { return {buf_, size()}; }
  void execute();
  /// Normalisation factor of execute() applied twice.
  double normalisation() const { return norm_; }

  /// Eigenvalue of the (negated) 1-D second difference for transform index m.
  const std::vector<double>& eigenvalues(int axis) const { return eig_[axis]; }

 private:
  DomainSpec domain_;
  Kind kind_;
  std::array<int, 3> shape_{};
  double* buf_ = nullptr;
  void* plan_ = nullptr;
  double norm_ = 1.0;
  std::vector<double> eig_[3];
};

TrigPlan& trig_plan(const DomainSpec& domain, TrigPlan::Kind kind);

}  // namespace qtf
