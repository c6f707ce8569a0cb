#include "qtf/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "config_json.hpp"
#include "qtf/coupled_stepper.hpp"
#include "qtf/errors.hpp"
#include "qtf/fluid_solver.hpp"
#include "qtf/initial_conditions.hpp"
#include "qtf/parallel.hpp"
#include "qtf/snapshot.hpp"

namespace qtf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kMaxSubstepLevel = 16;

/// One interval of length dt, split into 2^m substeps when a stability
/// limit rejects the whole step.
StepResult advance(const SimState& s, double dt, const ModelParams& params, bool record,
                   bool monitor, double& max_div) {
  for (int level = 0; level <= kMaxSubstepLevel; ++level) {
    const int sub = 1 << level;
    const double h = dt / sub;
    try {
      SimState cur = s;
      StepResult r;
      double div = 0.0;
      for (int i = 0; i < sub; ++i) {
        const bool last = i == sub - 1;
        r = step(cur, h, params, {.with_monitor = monitor && last, .record = record && last});
        div = std::max(div, r.fluid.div_residual);
        cur = std::move(r.state);
      }
      r.state = std::move(cur);
      max_div = std::max(max_div, div);
      return r;
    } catch (const StepRejected& e) {
      if (level == kMaxSubstepLevel) throw;
    }
  }
  throw StepRejected("unreachable", 0.0);
}

void check_finite(const DiagnosticsRecord& r) {
  bool ok = std::isfinite(r.kinetic) && std::isfinite(r.lg_energy) && std::isfinite(r.monitor);
  for (const auto& [p, v] : r.q_lp_norms) ok = ok && std::isfinite(v);
  if (!ok) throw SolverError("non-finite diagnostics", std::numeric_limits<double>::quiet_NaN(), 0);
}

json record_json(const DiagnosticsRecord& r) {
  json q;
  for (const auto& [p, v] : r.q_lp_norms) q[std::to_string(p)] = v;
  return {{"t", r.t},
          {"kinetic", r.kinetic},
          {"lg_energy", r.lg_energy},
          {"q_lp_norms", q},
          {"div_residual", r.div_residual},
          {"monitor", r.monitor},
          {"trace_residual", r.trace_residual}};
}

json summary_json(const RunSummary& s) {
  json j = {{"config_hash", s.config_hash},
            {"complete", s.complete},
            {"steps", s.steps},
            {"final", record_json(s.final_record)},
            {"initial_monitor", s.initial_monitor},
            {"max_monitor", s.max_monitor},
            {"max_div_residual", s.max_div_residual},
            {"decay_rate", s.decay_rate ? json(*s.decay_rate) : json(nullptr)},
            {"damping_condition", s.damping_condition},
            {"damping_rate_floor", s.damping_rate_floor}};
  if (!s.error.empty()) j["error"] = s.error;
  if (s.picard_windows > 0)
    j["picard"] = {{"windows", s.picard_windows},
                   {"max_iters", s.picard_max_iters},
                   {"max_ratio", s.picard_max_ratio},
                   {"all_converged", s.picard_all_converged}};
  return j;
}

class Recorder {
 public:
  Recorder(const RunConfig& config, RunSummary& summary)
      : config_(config), summary_(summary), dir_(config.output_dir) {
    fs::create_directories(dir_);
    if (config.snapshot_stride > 0) fs::create_directories(dir_ / "snapshots");
    csv_.open(dir_ / "diagnostics.csv", std::ios::binary | std::ios::trunc);
    if (!csv_) throw std::runtime_error("cannot write " + (dir_ / "diagnostics.csv").string());
    write_csv_header(csv_);
  }

  void record(const DiagnosticsRecord& r, bool first) {
    check_finite(r);
    write_csv_row(csv_, r);
    if (first) summary_.initial_monitor = r.monitor;
    summary_.max_monitor = std::max(summary_.max_monitor, r.monitor);
    summary_.final_record = r;
    const double q2 = r.q_lp_norms.at(2);
    positive_ = positive_ && q2 > 0.0;
    series_.emplace_back(r.t, q2);
  }

  void snapshot(const SimState& s, long step) {
    if (config_.snapshot_stride <= 0 || step % config_.snapshot_stride != 0) return;
    char name[32];
    std::snprintf(name, sizeof name, "%06ld.qtf", step);
    write_snapshot(dir_ / "snapshots" / ("u_" + std::string(name)), Snapshot::of("u", s.u, s.t));
    write_snapshot(dir_ / "snapshots" / ("Q_" + std::string(name)), Snapshot::of("Q", s.Q, s.t));
    write_snapshot(dir_ / "snapshots" / ("p_" + std::string(name)), Snapshot::of("p", s.p, s.t));
  }

  void finish() {
    csv_.flush();
    if (positive_ && series_.size() >= 8) summary_.decay_rate = decay_rate_fit(series_);
  }

  const fs::path& dir() const { return dir_; }

 private:
  const RunConfig& config_;
  RunSummary& summary_;
  fs::path dir_;
  std::ofstream csv_;
  std::vector<std::pair<double, double>> series_;
  bool positive_ = true;
};

}  // namespace

std::string summary_to_json(const RunSummary& summary) { return summary_json(summary).dump(2); }

RunSummary run_single(const RunConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  set_thread_count(options.threads);

  RunSummary summary;
  summary.config_hash = config_hash(config);
  summary.damping_condition = damping_condition_check(config.params);
  summary.damping_rate_floor = damping_rate_floor(config.params);
  if (!summary.damping_condition && options.log)
    *options.log << "warning: damping condition (a c >= 9 b^2 / 16, a > 0, c > 0) does not hold for "
                 << "a=" << config.params.a << " b=" << config.params.b << " c=" << config.params.c
                 << "; exponential decay of Q is not expected\n";

  Recorder rec(config, summary);
  const ModelParams& params = config.params;
  const long total = std::lround(config.t_end / config.dt);
  long n = 0;

  try {
    SimState state = make_initial_state(config);
    const double t0 = state.t;
    const double div0 = divergence_residual(state.u);
    summary.max_div_residual = div0;
    rec.record(compute_diagnostics(state, params, div0, config.monitor), true);
    rec.snapshot(state, 0);

    auto recorded = [&](long step) { return step % config.record_stride == 0 || step == total; };

    if (config.mode == RunMode::Direct) {
      while (n < total) {
        const long next = n + 1;
        StepResult r = advance(state, config.dt, params, recorded(next), config.monitor,
                               summary.max_div_residual);
        state = std::move(r.state);
        state.t = t0 + static_cast<double>(next) * config.dt;
        n = next;
        if (recorded(n)) {
          r.record.t = state.t;
          rec.record(r.record, false);
        }
        rec.snapshot(state, n);
      }
    } else {
      const PicardSettings& ps = *config.picard;
      const long window = std::lround(ps.window / config.dt);
      while (n < total) {
        const long k = std::min(window, total - n);
        const PicardResult res =
            picard_solve(state, static_cast<double>(k) * config.dt, config.dt, params, ps.tol,
                         ps.max_iters, ps.monitor_metric ? PicardMetric::Monitor : PicardMetric::L2);
        ++summary.picard_windows;
        summary.picard_max_iters = std::max(summary.picard_max_iters, res.report.iters);
        summary.picard_max_ratio = std::max(summary.picard_max_ratio, res.report.max_ratio());
        summary.picard_all_converged = summary.picard_all_converged && res.report.converged;
        if (!res.report.converged && options.log)
          *options.log << "warning: picard window starting at t=" << state.t
                       << " did not converge (delta " << res.report.deltas.back() << ")\n";
        for (long j = 1; j <= k; ++j) {
          SimState s = res.trajectory[j];
          s.t = t0 + static_cast<double>(n + j) * config.dt;
          const double div = divergence_residual(s.u);
          summary.max_div_residual = std::max(summary.max_div_residual, div);
          if (recorded(n + j)) rec.record(compute_diagnostics(s, params, div, config.monitor), false);
          rec.snapshot(s, n + j);
          if (j == k) state = std::move(s);
        }
        n += k;
      }
    }
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "step " << (n + 1) << ": " << e.what();
    summary.error = msg.str();
    if (options.log) *options.log << "error: " << summary.error << '\n';
  }

  summary.steps = n;
  summary.complete = summary.error.empty();
  rec.finish();
  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest = {{"config", detail::config_json(config, true)},
                   {"config_hash", summary.config_hash},
                   {"complete", summary.complete},
                   {"wall_time_s", summary.wall_time_s},
                   {"threads", options.threads},
                   {"summary", summary_json(summary)}};
  std::ofstream(rec.dir() / "manifest.json") << manifest.dump(2) << '\n';
  return summary;
}

}  // namespace qtf
