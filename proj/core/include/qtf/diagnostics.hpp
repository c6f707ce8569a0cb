#pragma once

#include <map>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "qtf/field.hpp"
#include "qtf/state.hpp"
#include "qtf/tensor_algebra.hpp"

namespace qtf {

/// Scalar observables recorded after a step.
struct DiagnosticsRecord {
  double t = 0.0;
  double kinetic = 0.0;    // 1/2 ||u||_2^2
  double lg_energy = 0.0;  // integral of the Landau-de Gennes density
  std::map<int, double> q_lp_norms;  // p -> ||Q||_p, p in {2, 4, 6}
  double div_residual = 0.0;
  double monitor = 0.0;  // sobolev_monitor
  double trace_residual = 0.0;

  double total_energy() const { return kinetic + lg_energy; }
};

double kinetic_energy(const VelocityField& u);

/// Discrete integral of (L/2)|grad Q|^2 + (a/2) tr Q^2 - (b/3) tr Q^3 + (c/4)(tr Q^2)^2.
double landau_de_gennes_energy(const QTensorField& q, const ModelParams& params);

/// a c >= 9 b^2 / 16 with a > 0 and c > 0.
bool damping_condition_check(const ModelParams& params);

/// a - 9 b^2 / (16 c): the L^p decay rate implied by the damping estimate.
double damping_rate_floor(const ModelParams& params);

/// Least-squares slope of -log(value) against t over the trailing
/// tail_fraction of the series. Needs at least 8 samples with strictly
/// increasing t; throws std::domain_error on non-positive values and
/// std::invalid_argument on malformed input.
double decay_rate_fit(std::span<const std::pair<double, double>> series, double tail_fraction = 0.5);

/// (E_next - E_prev) / dt with E = kinetic + lg_energy.
double energy_budget(const DiagnosticsRecord& prev, const DiagnosticsRecord& next, double dt);

/// Largest |tr Q| over the grid computed from the reconstructed matrix.
double trace_residual(const QTensorField& q);

DiagnosticsRecord compute_diagnostics(const SimState& state, const ModelParams& params,
                                      double div_residual, bool with_monitor = true);

/// Header `t,kinetic,lg_energy,q_l2,q_l4,q_l6,div_residual,monitor`.
void write_csv_header(std::ostream& os);
/// One row with 17 significant digits.
void write_csv_row(std::ostream& os, const DiagnosticsRecord& rec);

}  // namespace qtf
