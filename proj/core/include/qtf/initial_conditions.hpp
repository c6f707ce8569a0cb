#pragma once

#include "qtf/config.hpp"
#include "qtf/state.hpp"

namespace qtf {

/// Builds the t = 0 state described by config.initial_condition on
/// config.domain. Deterministic in the seed.
SimState make_initial_state(const RunConfig& config);

/// Low-pass filtered, seeded white-noise fields (see RandomSmoothInit).
QTensorField random_smooth_q(const DomainSpec& domain, std::uint64_t seed, double amplitude,
                             int cutoff_mode);
VelocityField random_smooth_u(const DomainSpec& domain, std::uint64_t seed, double amplitude,
                              int cutoff_mode);

}  // namespace qtf
