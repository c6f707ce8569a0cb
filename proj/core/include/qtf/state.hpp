#pragma once

#include "qtf/field.hpp"

namespace qtf {

/// Full discrete solution (u, Q, p) at time t on a shared domain.
struct SimState {
  VelocityField u;
  QTensorField Q;
  ScalarField p;
  double t = 0.0;

  static SimState zero(const DomainSpec& domain) {
    return {VelocityField(domain), QTensorField(domain), ScalarField(domain), 0.0};
  }
  const DomainSpec& domain() const { return Q.domain(); }

  friend bool operator==(const SimState&, const SimState&) = default;
};

}  // namespace qtf
