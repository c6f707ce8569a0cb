#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qtf/run.hpp"

namespace qtf {

/// One sweep dimension: a dotted path into the config document
/// (e.g. "initial_condition.amplitude") and the JSON values it takes.
struct SweepAxis {
  std::string path;
  std::vector<std::string> values;  // JSON text of each value
};

struct SweepResult {
  std::size_t index = 0;  // position in the Cartesian product, last axis fastest
  std::string config_hash;
  std::string status;  // "ok" or "failed"
  std::string error;
  std::string summary;  // summary_to_json of the run, empty if it never started
  bool reused = false;  // taken from a previous sweep on resume; not serialized
};

struct SweepManifest {
  std::string base;  // JSON text of the base config document
  std::vector<SweepAxis> axes;
  std::vector<SweepResult> results;
};

inline constexpr std::size_t kMaxSweepRuns = 10000;

/// Document shape:
///   {"base": {...config...}, "axes": [{"path": "...", "values": [...]}],
///    "results": [...]}   (results optional)
SweepManifest parse_manifest(const std::string& text);
std::string manifest_to_json(const SweepManifest& manifest);

struct SweepPoint {
  std::size_t index = 0;
  std::string config;  // resolved config document, or empty when invalid
  std::string error;   // why the point could not be resolved
};

/// Cartesian product of the axes applied to the base document. Throws
/// std::invalid_argument for more than kMaxSweepRuns points.
std::vector<SweepPoint> expand_sweep(const SweepManifest& manifest);

struct SweepOptions {
  int parallelism = 1;
  bool resume = false;  // skip points whose hash already completed
  int threads = 1;      // per-run cell-loop threads
  std::ostream* log = nullptr;
};

/// Runs every point; each one writes to <base output_dir>/<config hash>/.
/// Failures are recorded and do not stop the sweep. Results are returned
/// sorted by index whatever the parallelism.
SweepManifest run_sweep(const SweepManifest& manifest, const SweepOptions& options = {});

}  // namespace qtf
