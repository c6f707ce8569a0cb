#include "qtf/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace qtf {

namespace {

// The FFTW planner is not re-entrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

auto domain_key(const DomainSpec& d) {
  return std::make_tuple(d.nx, d.ny, d.nz, d.lx, d.ly, d.lz, static_cast<int>(d.bc));
}

}  // namespace

SpectralPlan::SpectralPlan(const DomainSpec& domain) : domain_(domain) {
  if (domain.bc != BoundaryKind::Periodic)
    throw std::invalid_argument("SpectralPlan requires a periodic domain");
  const int nx = domain.nx, ny = domain.ny, nz = domain.nz;
  spectral_size_ = static_cast<std::size_t>(nx / 2 + 1) * ny * nz;
  real_buf_ = fftw_alloc_real(domain.size());
  cplx_buf_ = reinterpret_cast<Complex*>(fftw_alloc_complex(spectral_size_));
  {
    std::lock_guard lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_r2c_3d(nz, ny, nx, real_buf_,
                                     reinterpret_cast<fftw_complex*>(cplx_buf_), FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_3d(nz, ny, nx, reinterpret_cast<fftw_complex*>(cplx_buf_),
                                     real_buf_, FFTW_ESTIMATE);
  }

  for (int axis = 0; axis < 3; ++axis) {
    const int n = domain.cells(axis);
    const int count = axis == 0 ? n / 2 + 1 : n;
    const double base = 2.0 * std::numbers::pi / domain.length(axis);
    k_[axis].resize(count);
    k2_[axis].resize(count);
    for (int i = 0; i < count; ++i) {
      const int m = signed_mode(axis, i);
      const double k = base * m;
      k2_[axis][i] = k * k;
      k_[axis][i] = (2 * std::abs(m) == n) ? 0.0 : k;
    }
  }
  lap_.resize(spectral_size_);
  for (std::size_t f = 0; f < spectral_size_; ++f) {
    int ix, iy, iz;
    mode(f, ix, iy, iz);
    lap_[f] = k2_[0][ix] + k2_[1][iy] + k2_[2][iz];
  }
}

SpectralPlan::~SpectralPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(real_buf_);
  fftw_free(cplx_buf_);
}

int SpectralPlan::signed_mode(int axis, int index) const {
  if (axis == 0) return index;
  const int n = domain_.cells(axis);
  return index <= n / 2 ? index : index - n;
}

void SpectralPlan::forward(std::span<const double> in, std::span<Complex> out) {
  std::copy(in.begin(), in.end(), real_buf_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::copy(cplx_buf_, cplx_buf_ + spectral_size_, out.begin());
}

void SpectralPlan::inverse(std::span<const Complex> in, std::span<double> out) {
  std::copy(in.begin(), in.end(), cplx_buf_);
  inverse_from_buffer(out);
}

void SpectralPlan::inverse_from_buffer(std::span<double> out) {
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  const double scale = 1.0 / static_cast<double>(domain_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_buf_[i] * scale;
}

SpectralPlan& spectral_plan(const DomainSpec& domain) {
  thread_local std::map<decltype(domain_key(domain)), std::unique_ptr<SpectralPlan>> cache;
  auto& slot = cache[domain_key(domain)];
  if (!slot) slot = std::make_unique<SpectralPlan>(domain);
  return *slot;
}

TrigPlan::TrigPlan(const DomainSpec& domain, Kind kind) : domain_(domain), kind_(kind) {
  if (domain.bc != BoundaryKind::Box) throw std::invalid_argument("TrigPlan requires a Box domain");
  const bool cosine = kind == Kind::Cosine;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = domain.cells(axis);
    shape_[axis] = cosine ? n + 1 : n - 1;
    const double h = domain.spacing(axis);
    eig_[axis].resize(shape_[axis]);
    for (int i = 0; i < shape_[axis]; ++i) {
      const int m = cosine ? i : i + 1;
      eig_[axis][i] = (2.0 - 2.0 * std::cos(std::numbers::pi * m / n)) / (h * h);
    }
    norm_ *= 2.0 * n;
  }
  buf_ = fftw_alloc_real(size());
  const fftw_r2r_kind k = cosine ? FFTW_REDFT00 : FFTW_RODFT00;
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_r2r_3d(shape_[2], shape_[1], shape_[0], buf_, buf_, k, k, k, FFTW_ESTIMATE);
}

TrigPlan::~TrigPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(buf_);
}

void TrigPlan::execute() { fftw_execute(static_cast<fftw_plan>(plan_)); }

TrigPlan& trig_plan(const DomainSpec& domain, TrigPlan::Kind kind) {
  using Key = std::pair<decltype(domain_key(domain)), int>;
  thread_local std::map<Key, std::unique_ptr<TrigPlan>> cache;
  auto& slot = cache[Key{domain_key(domain), static_cast<int>(kind)}];
  if (!slot) slot = std::make_unique<TrigPlan>(domain, kind);
  return *slot;
}

}  // namespace qtf
