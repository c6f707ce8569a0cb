#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qtf/config.hpp"
#include "qtf/diagnostics.hpp"

namespace qtf {

struct RunSummary {
  std::string config_hash;
  bool complete = false;
  std::string error;  // empty on success
  long steps = 0;
  DiagnosticsRecord final_record;
  double initial_monitor = 0.0;
  double max_monitor = 0.0;
  double max_div_residual = 0.0;
  /// Fitted decay exponent of ||Q||_2 when it stayed positive throughout.
  std::optional<double> decay_rate;
  bool damping_condition = false;
  double damping_rate_floor = 0.0;
  double wall_time_s = 0.0;

  // Picard mode only.
  int picard_windows = 0;
  int picard_max_iters = 0;
  double picard_max_ratio = 0.0;
  bool picard_all_converged = true;
};

struct RunOptions {
  std::ostream* log = nullptr;
  int threads = 1;
};

/// Runs config to t_end, writing into config.output_dir:
///   diagnostics.csv   one row per recorded step
///   snapshots/        u_/Q_/p_<step>.qtf at snapshot_stride (if > 0)
///   manifest.json     resolved config, hash, wall time, completion status
/// Steps that exceed a stability limit are retried as 2^m equal substeps.
/// Solver failures end the run early; outputs are flushed and the manifest
/// is marked incomplete.
RunSummary run_single(const RunConfig& config, const RunOptions& options = {});

std::string summary_to_json(const RunSummary& summary);

}  // namespace qtf
