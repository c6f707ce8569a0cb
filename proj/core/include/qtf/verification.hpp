#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qtf {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// tr(Q^3) <= (3 eps/8) tr(Q^2)^2 + 3/(2 eps) tr(Q^2) for `samples` random
/// trace-free symmetric Q (component scale log-uniform up to 1e3) against 13
/// eps values log-spaced over [1e-3, 1e3], relative tolerance 1e-12.
CheckResult check_cubic_trace_bound(std::size_t samples = 100000, std::uint64_t seed = 1);

/// |(Omega Q - Q Omega) : Q| <= 1e-13 |Omega| |Q|^2 for random pairs.
CheckResult check_rotation_cancellation(std::size_t samples = 10000, std::uint64_t seed = 2);

/// tr(Q^2), tr(Q^3) against eigenvalue sums for Q = R diag(l) R^T.
CheckResult check_trace_eigen_oracle(std::size_t samples = 10000, std::uint64_t seed = 3);

/// Projection is idempotent on Q and reproduces the symmetric trace-free
/// part of random matrices; commutator_stress is antisymmetric.
CheckResult check_projection_identities(std::size_t samples = 10000, std::uint64_t seed = 4);

/// Periodic grid: div(grad f) = Lap f, Leray projection is idempotent and
/// leaves a divergence below 1e-12; Box grid: divergence below 1e-10.
CheckResult check_operator_identities(std::uint64_t seed = 5);

/// All of the above, in order.
std::vector<CheckResult> run_verification(std::ostream* log = nullptr);

}  // namespace qtf
