#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "qtf/domain.hpp"
#include "qtf/tensor_algebra.hpp"

namespace qtf {

/// Schema violation or invariant failure in a run configuration; key() is
/// the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class RunMode { Direct, Picard };

struct PicardSettings {
  double window = 0.0;  // time units; a whole number of steps
  double tol = 1e-10;
  int max_iters = 20;
  bool monitor_metric = false;  // measure iterate distances with sobolev_monitor instead of L2
};

struct ZeroInit {
  friend bool operator==(const ZeroInit&, const ZeroInit&) = default;
};

/// Q = amplitude * profile(x_axis) * diag(1, 1, -2)/sqrt(6), u = 0. The
/// profile is sin(2 pi k x / l) on periodic domains and cos(pi k x / l) on
/// Box domains (zero normal derivative on the walls).
struct SineModeInit {
  int k = 1;
  double amplitude = 0.1;
  int axis = 0;
  friend bool operator==(const SineModeInit&, const SineModeInit&) = default;
};

/// Low-pass filtered white noise: Q scaled to max Frobenius magnitude
/// `amplitude`, u made solenoidal and scaled to max speed
/// `velocity_amplitude` (defaults to `amplitude`).
struct RandomSmoothInit {
  std::uint64_t seed = 0;
  double amplitude = 0.1;
  int cutoff_mode = 2;
  std::optional<double> velocity_amplitude;
  friend bool operator==(const RandomSmoothInit&, const RandomSmoothInit&) = default;
};

using InitialCondition = std::variant<ZeroInit, SineModeInit, RandomSmoothInit>;

struct RunConfig {
  DomainSpec domain;
  ModelParams params;
  double dt = 1e-3;
  double t_end = 1.0;
  RunMode mode = RunMode::Direct;
  std::optional<PicardSettings> picard;
  InitialCondition initial_condition = ZeroInit{};
  int snapshot_stride = 0;  // 0 disables snapshots
  int record_stride = 1;    // diagnostics row every N steps
  bool monitor = true;      // compute sobolev_monitor for each row
  std::string output_dir = "qtf_out";

  /// Throws ConfigError for invariant violations.
  void validate() const;
};

/// Parses and validates a JSON run configuration. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);

/// Canonical JSON of the fully resolved configuration (sorted keys).
std::string config_to_json(const RunConfig& config, bool include_output_dir = true);

/// Git-style SHA-1 ("blob <len>\0" + canonical JSON, output_dir excluded).
std::string config_hash(const RunConfig& config);

}  // namespace qtf
