#include "qtf/linear_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qtf/spectral.hpp"

namespace qtf {

namespace {

void helmholtz_periodic(const DomainSpec& d, std::span<double> x, double coef) {
  auto& plan = spectral_plan(d);
  auto xhat = plan.forward(x);
  const auto& sym = plan.laplacian_symbol();
  for (std::size_t i = 0; i < xhat.size(); ++i) xhat[i] /= 1.0 + coef * sym[i];
  plan.inverse(xhat, x);
}

void helmholtz_box(const DomainSpec& d, std::span<double> x, double coef, WallCondition wall) {
  const bool neumann = wall == WallCondition::Neumann;
  auto& plan = trig_plan(d, neumann ? TrigPlan::Kind::Cosine : TrigPlan::Kind::Sine);
  const auto& shape = plan.shape();
  const int off = neumann ? 0 : 1;
  auto buf = plan.buffer();

  auto gather_scatter = [&](bool gather) {
    for (int k = 0; k < shape[2]; ++k)
      for (int j = 0; j < shape[1]; ++j)
        for (int i = 0; i < shape[0]; ++i) {
          const std::size_t t = i + static_cast<std::size_t>(shape[0]) * (j + shape[1] * k);
          const std::size_t g = d.index(i + off, j + off, k + off);
          if (gather)
            buf[t] = x[g];
          else
            x[g] = buf[t];
        }
  };

  gather_scatter(true);
  plan.execute();
  const auto& ex = plan.eigenvalues(0);
  const auto& ey = plan.eigenvalues(1);
  const auto& ez = plan.eigenvalues(2);
  const double norm = plan.normalisation();
  for (int k = 0; k < shape[2]; ++k)
    for (int j = 0; j < shape[1]; ++j)
      for (int i = 0; i < shape[0]; ++i) {
        const std::size_t t = i + static_cast<std::size_t>(shape[0]) * (j + shape[1] * k);
        buf[t] /= norm * (1.0 + coef * (ex[i] + ey[j] + ez[k]));
      }
  plan.execute();
  if (!neumann) std::fill(x.begin(), x.end(), 0.0);
  gather_scatter(false);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

void helmholtz_solve(const DomainSpec& domain, std::span<double> x, double coef, WallCondition wall) {
  if (domain.bc == BoundaryKind::Periodic)
    helmholtz_periodic(domain, x, coef);
  else
    helmholtz_box(domain, x, coef, wall);
}

CgResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                            std::span<const double> rhs, std::span<double> x, double tol,
                            int max_iters) {
  const std::size_t n = rhs.size();
  std::vector<double> r(n), p(n), ap(n);
  apply(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ap[i];
  p = r;
  double rr = dot(r, r);
  CgResult res;
  res.residual = max_abs(r);
  if (res.residual <= tol) {
    res.converged = true;
    return res;
  }
  for (int it = 1; it <= max_iters; ++it) {
    apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    res.iterations = it;
    res.residual = max_abs(r);
    if (res.residual <= tol) {
      res.converged = true;
      return res;
    }
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  return res;
}

}  // namespace qtf
