#include "qtf/qtensor_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qtf/errors.hpp"
#include "qtf/fluid_solver.hpp"
#include "qtf/linear_solvers.hpp"
#include "qtf/parallel.hpp"

namespace qtf {

QTensorField advect_q(const QTensorGradient& grad_q, const VelocityField& u) {
  const DomainSpec& d = u.domain();
  QTensorField out(d);
  const int n = static_cast<int>(u.size());
  parallel_for(n, [&](int i) {
    for (std::size_t c = 0; c < 5; ++c)
      out(c, i) = -(u(0, i) * grad_q[0](c, i) + u(1, i) * grad_q[1](c, i) +
                    u(2, i) * grad_q[2](c, i));
  });
  return out;
}

QTensorField advect_q(const QTensorField& q, const VelocityField& u) {
  if (!(q.domain() == u.domain())) throw std::invalid_argument("advect_q: domain mismatch");
  return advect_q(grad(q, BoundaryRule::Mirror), u);
}

QTensorField bulk_source(const QTensorField& q, const ModelParams& params) {
  QTensorField out(q.domain());
  parallel_for(static_cast<int>(q.size()), [&](int i) {
    set_q(out, i, params.gamma * bulk_molecular_field(q_at(q, i), params));
  });
  return out;
}

double bulk_dt_limit(const QTensorField& q, const ModelParams& params) {
  const double qmax = lp_norm(q, std::numeric_limits<double>::infinity());
  return 0.2 / (params.gamma * (std::abs(params.a) + std::abs(params.b) * qmax +
                                params.c * qmax * qmax) +
                1e-8);
}

QTensorField q_linear_step(const QTensorField& q, const QTensorField& rhs, double dt,
                           const ModelParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  QTensorField out = q;
  out.axpy(dt, rhs);
  const double coef = dt * params.gamma * params.L;
  for (std::size_t c = 0; c < 5; ++c)
    helmholtz_solve(q.domain(), out.component(c), coef, WallCondition::Neumann);
  return out;
}

QTensorField q_step(const QTensorField& q, const VelocityField& u, double dt,
                    const ModelParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double limit = std::min(advective_dt_limit(u), bulk_dt_limit(q, params));
  if (dt > limit) {
    std::ostringstream msg;
    msg << "Q-step stability limit violated: dt " << dt << " > limit " << limit;
    throw StepRejected(msg.str(), limit);
  }
  QTensorField rhs = advect_q(q, u);
  rhs += bulk_source(q, params);
  return q_linear_step(q, rhs, dt, params);
}

}  // namespace qtf
