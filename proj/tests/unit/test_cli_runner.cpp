#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qtf/config.hpp"
#include "qtf/run.hpp"
#include "qtf/sweep.hpp"
#include "support.hpp"

using namespace qtf;
using namespace qtf::test;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json small_config(const fs::path& out) {
  return {{"domain", {{"nx", 8}, {"ny", 8}, {"nz", 8}, {"bc", "periodic"}}},
          {"params", {{"a", 1.0}, {"b", 0.5}, {"c", 1.0}}},
          {"dt", 1e-2},
          {"t_end", 0.1},
          {"initial_condition", {{"kind", "random_smooth"}, {"seed", 3}, {"amplitude", 0.1}}},
          {"output_dir", out.string()}};
}

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse_config(R"({"domain": {"nx": 8, "ny": 8, "nz": 8}, "dt": 0.01, "t_end": 1})");
  CHECK(c.mode == RunMode::Direct);
  CHECK(c.params.nu == 1.0);
  CHECK(c.params.gamma == 1.0);
  CHECK(c.params.L == 1.0);
  CHECK(c.params.xi == 0.0);
  CHECK(c.domain.bc == BoundaryKind::Periodic);
  CHECK(std::holds_alternative<ZeroInit>(c.initial_condition));
  CHECK(c.snapshot_stride == 0);
  CHECK(c.record_stride == 1);
  CHECK_FALSE(c.picard.has_value());
}

TEST_CASE("config errors name the offending key") {
  const std::string base = R"("domain": {"nx": 8, "ny": 8, "nz": 8}, "dt": 0.01, "t_end": 1)";
  CHECK(config_error_key("{" + base + R"(, "params": {"xi": 0.1}})") == "params.xi");
  CHECK(config_error_key("{" + base + R"(, "colour": 1})") == "colour");
  CHECK(config_error_key("{" + base + R"(, "params": {"gama": 1}})") == "params.gama");
  CHECK(config_error_key(R"({"domain": {"nx": 8, "ny": 8, "nz": 8}, "dt": 0.01})") == "t_end");
  CHECK(config_error_key(R"({"domain": {"nx": 8, "ny": 8, "nz": 8}, "dt": -1, "t_end": 1})") == "dt");
  CHECK(config_error_key(R"({"domain": {"nx": 7, "ny": 8, "nz": 8}, "dt": 0.01, "t_end": 1})") == "domain");
  CHECK(config_error_key(R"({"domain": {"nx": "8"}, "dt": 0.01, "t_end": 1})") == "domain.nx");
  CHECK(config_error_key("{" + base + R"(, "mode": "picard"})") == "picard");
  CHECK(config_error_key("{" + base + R"(, "mode": "picard", "picard": {"window": 0.0105}})") == "picard.window");
  CHECK(config_error_key("{" + base + R"(, "initial_condition": {"kind": "vortex"}})") == "initial_condition.kind");
  CHECK(config_error_key("{" + base +
                         R"(, "initial_condition": {"kind": "random_smooth", "seed": -1}})") ==
        "initial_condition.seed");
  CHECK(config_error_key("{" + base +
                         R"(, "initial_condition": {"kind": "random_smooth", "amplitude": -0.5}})") ==
        "initial_condition.amplitude");
  CHECK(config_error_key("{not json") == "");
  CHECK_THROWS_AS(parse_config("[]"), ConfigError);
}

TEST_CASE("64-bit seeds and round trips") {
  const RunConfig c = parse_config(R"({"domain": {"nx": 8, "ny": 8, "nz": 8}, "dt": 0.01, "t_end": 1,
      "initial_condition": {"kind": "random_smooth", "seed": 18446744073709551615, "amplitude": 0.2,
                            "cutoff_mode": 3, "velocity_amplitude": 0.0},
      "mode": "picard", "picard": {"window": 0.08, "metric": "monitor"}})");
  const auto& ic = std::get<RandomSmoothInit>(c.initial_condition);
  CHECK(ic.seed == 18446744073709551615ull);
  CHECK(ic.velocity_amplitude == 0.0);
  CHECK(c.picard->monitor_metric);
  const RunConfig again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
  CHECK(config_hash(again) == config_hash(c));
}

TEST_CASE("config hash is stable and ignores output_dir") {
  RunConfig a = parse_config(R"({"domain": {"nx": 8, "ny": 8, "nz": 8}, "dt": 0.01, "t_end": 1})");
  RunConfig b = parse_config(R"({"t_end": 1.0, "dt": 0.01, "domain": {"nz": 8, "ny": 8, "nx": 8},
                                 "output_dir": "elsewhere"})");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 40);
  b.dt = 0.02;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("damping warning for (a, b, c) = (0.1, 1, 1)") {
  ScratchDir dir("warn");
  json j = small_config(dir.path() / "run");
  j["params"] = {{"a", 0.1}, {"b", 1.0}, {"c", 1.0}};
  j["t_end"] = 0.02;
  const RunConfig c = parse_config(j.dump());
  std::ostringstream log;
  const RunSummary s = run_single(c, {.log = &log});
  CHECK(s.complete);
  CHECK_FALSE(s.damping_condition);
  CHECK(log.str().find("warning: damping condition") != std::string::npos);

  std::ostringstream quiet;
  run_single(parse_config(small_config(dir.path() / "ok").dump()), {.log = &quiet});
  CHECK(quiet.str().empty());
}

TEST_CASE("zero initial condition gives all-zero diagnostics") {
  ScratchDir dir("zero");
  json j = small_config(dir.path() / "run");
  j["initial_condition"] = {{"kind", "zero"}};
  j["snapshot_stride"] = 5;
  const RunSummary s = run_single(parse_config(j.dump()));
  CHECK(s.complete);
  CHECK(s.steps == 10);
  CHECK(s.max_monitor == 0.0);
  CHECK_FALSE(s.decay_rate.has_value());

  std::ifstream csv(dir.path() / "run" / "diagnostics.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,kinetic,lg_energy,q_l2,q_l4,q_l6,div_residual,monitor");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    const std::string rest = line.substr(line.find(','));
    CHECK(rest == ",0,0,0,0,0,0,0");
  }
  CHECK(rows == 11);
  CHECK(fs::exists(dir.path() / "run" / "snapshots" / "u_000000.qtf"));
  CHECK(fs::exists(dir.path() / "run" / "snapshots" / "Q_000010.qtf"));
  CHECK(fs::exists(dir.path() / "run" / "snapshots" / "p_000005.qtf"));

  const json m = json::parse(slurp(dir.path() / "run" / "manifest.json"));
  CHECK(m["complete"] == true);
  CHECK(m["config_hash"] == s.config_hash);
  CHECK(m.contains("wall_time_s"));
  // The stored config reproduces the run.
  CHECK(config_hash(parse_config(m["config"].dump())) == s.config_hash);
}

TEST_CASE("replaying a manifest reproduces the diagnostics byte for byte") {
  ScratchDir dir("replay");
  const RunConfig c = parse_config(small_config(dir.path() / "a").dump());
  const RunSummary s = run_single(c);
  CHECK(s.complete);
  CHECK(s.decay_rate.has_value());
  json m = json::parse(slurp(dir.path() / "a" / "manifest.json"));
  m["config"]["output_dir"] = (dir.path() / "b").string();
  run_single(parse_config(m["config"].dump()));
  CHECK(slurp(dir.path() / "a" / "diagnostics.csv") == slurp(dir.path() / "b" / "diagnostics.csv"));
}

TEST_CASE("record_stride thins the CSV") {
  ScratchDir dir("stride");
  json j = small_config(dir.path() / "run");
  j["record_stride"] = 3;
  run_single(parse_config(j.dump()));
  std::ifstream csv(dir.path() / "run" / "diagnostics.csv");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  // Header, step 0, steps 3, 6, 9 and the final step 10.
  CHECK(lines == 6);
}

TEST_CASE("solver failures end the run and mark it incomplete") {
  ScratchDir dir("fail");
  json j = small_config(dir.path() / "run");
  // A large amplitude drives the bulk limit far below dt: more than 2^16 substeps.
  j["initial_condition"]["amplitude"] = 1e6;
  j["initial_condition"]["velocity_amplitude"] = 0.0;
  const RunSummary s = run_single(parse_config(j.dump()));
  CHECK_FALSE(s.complete);
  CHECK(s.error.rfind("step 1:", 0) == 0);
  const json m = json::parse(slurp(dir.path() / "run" / "manifest.json"));
  CHECK(m["complete"] == false);
  CHECK(m["summary"].contains("error"));
  CHECK(fs::exists(dir.path() / "run" / "diagnostics.csv"));
}

TEST_CASE("Picard mode runs and reports contraction") {
  ScratchDir dir("picard");
  json j = small_config(dir.path() / "run");
  j["mode"] = "picard";
  j["picard"] = {{"window", 0.05}};
  const RunSummary s = run_single(parse_config(j.dump()));
  CHECK(s.complete);
  CHECK(s.picard_windows == 2);
  CHECK(s.picard_all_converged);
  CHECK(s.picard_max_ratio < 1.0);
}

TEST_CASE("manifest parsing and expansion") {
  const std::string text = R"({"base": {"domain": {"nx": 8, "ny": 8, "nz": 8}, "dt": 0.01, "t_end": 0.02},
      "axes": [{"path": "params.b", "values": [0, 0.5]},
               {"path": "initial_condition", "values": [{"kind": "zero"}, {"kind": "sine_mode"}]},
               {"path": "dt", "values": [0.01, -1]}]})";
  const SweepManifest m = parse_manifest(text);
  CHECK(m.axes.size() == 3);
  const SweepManifest back = parse_manifest(manifest_to_json(m));
  CHECK(manifest_to_json(back) == manifest_to_json(m));

  const auto points = expand_sweep(m);
  REQUIRE(points.size() == 8);
  // Last axis varies fastest.
  CHECK(points[0].error.empty());
  CHECK_FALSE(points[1].error.empty());
  const RunConfig p6 = parse_config(points[6].config);
  CHECK(p6.params.b == 0.5);
  CHECK(std::holds_alternative<SineModeInit>(p6.initial_condition));
  CHECK(p6.dt == 0.01);

  CHECK_THROWS(parse_manifest(R"({"base": {}, "axes": [], "extra": 1})"));
  CHECK_THROWS(parse_manifest("not json"));
}

TEST_CASE("sweeps above the run limit are rejected") {
  json values = json::array();
  for (int i = 0; i < 101; ++i) values.push_back(i);
  json doc = {{"base", {{"domain", {{"nx", 8}, {"ny", 8}, {"nz", 8}}}, {"dt", 0.01}, {"t_end", 0.02}}},
              {"axes", {{{"path", "params.a"}, {"values", values}}, {{"path", "params.c"}, {"values", values}}}}};
  CHECK_THROWS_AS(expand_sweep(parse_manifest(doc.dump())), std::invalid_argument);
  doc["axes"][0]["values"].erase(100);
  doc["axes"][1]["values"].erase(100);
  CHECK(expand_sweep(parse_manifest(doc.dump())).size() == kMaxSweepRuns);
}

TEST_CASE("single-point sweep matches run_single; resume and parallelism") {
  ScratchDir dir("sweep");
  const json base = small_config(dir.path() / "sweep");
  json doc = {{"base", base}, {"axes", {{{"path", "initial_condition.amplitude"}, {"values", {0.1}}}}}};
  const SweepManifest single = run_sweep(parse_manifest(doc.dump()));
  REQUIRE(single.results.size() == 1);
  CHECK(single.results[0].status == "ok");
  json direct_cfg = base;
  direct_cfg["output_dir"] = (dir.path() / "direct").string();
  const RunConfig direct = parse_config(direct_cfg.dump());
  const RunSummary s = run_single(direct);
  CHECK(single.results[0].config_hash == s.config_hash);
  CHECK(single.results[0].summary == summary_to_json(s));
  CHECK(slurp(dir.path() / "sweep" / s.config_hash / "diagnostics.csv") ==
        slurp(dir.path() / "direct" / "diagnostics.csv"));

  doc["axes"] = {{{"path", "initial_condition.amplitude"}, {"values", {0.0, 0.05, 0.1, 0.2}}},
                 {{"path", "params.b"}, {"values", {0.0, 0.5}}},
                 {{"path", "t_end"}, {"values", {0.05, 0.001}}}};
  const SweepManifest m = parse_manifest(doc.dump());
  std::ostringstream log1, log3;
  const SweepManifest serial = run_sweep(m, {.parallelism = 1, .log = &log1});
  const SweepManifest parallel = run_sweep(m, {.parallelism = 3, .log = &log3});
  REQUIRE(serial.results.size() == 16);
  REQUIRE(parallel.results.size() == 16);
  int failed = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(serial.results[i].index == i);
    CHECK(parallel.results[i].index == i);
    CHECK(serial.results[i].config_hash == parallel.results[i].config_hash);
    CHECK(serial.results[i].status == parallel.results[i].status);
    CHECK(serial.results[i].summary == parallel.results[i].summary);
    failed += serial.results[i].status == "failed";
  }
  // t_end = 0.001 < dt is invalid for every combination.
  CHECK(failed == 8);

  const SweepManifest again = run_sweep(serial, {.parallelism = 2, .resume = true});
  int executed = 0;
  for (const auto& r : again.results)
    if (r.status == "ok") {
      CHECK(r.reused);
    } else {
      executed += !r.reused;
    }
  CHECK(executed == 8);
  CHECK(manifest_to_json(again) == manifest_to_json(serial));
}

#ifdef QTF_CLI_PATH
TEST_CASE("command-line interface") {
  ScratchDir dir("cli");
  const std::string cli = QTF_CLI_PATH;
  auto run = [&](const std::string& args, const std::string& env = "") {
    const std::string cmd = env + cli + " " + args + " > " + (dir.path() / "stdout.txt").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  CHECK(run("verify") == 0);
  CHECK(slurp(dir.path() / "stdout.txt").find("FAIL") == std::string::npos);

  std::ofstream(dir.path() / "run.json") << small_config(dir.path() / "ignored").dump();
  CHECK(run("simulate --config " + (dir.path() / "run.json").string() + " --out " + (dir.path() / "out").string() +
            " --threads 2") == 0);
  CHECK(fs::exists(dir.path() / "out" / "diagnostics.csv"));
  const json m = json::parse(slurp(dir.path() / "out" / "manifest.json"));
  CHECK(m["threads"] == 2);
  CHECK(run("simulate --config " + (dir.path() / "run.json").string() + " --out " + (dir.path() / "out1").string() +
                " --threads 3",
            "QTF_THREADS=1 ") == 0);
  CHECK(json::parse(slurp(dir.path() / "out1" / "manifest.json"))["threads"] == 1);

  std::ofstream(dir.path() / "bad.json") << R"({"domain": {}, "dt": 0.01, "t_end": 1, "params": {"xi": 0.1}})";
  CHECK(run("simulate --config " + (dir.path() / "bad.json").string()) == 2);
  CHECK(slurp(dir.path() / "stdout.txt").find("params.xi") != std::string::npos);

  json doc = {{"base", small_config(dir.path() / "sw")},
              {"axes", {{{"path", "initial_condition.seed"}, {"values", {1, 2}}}}}};
  std::ofstream(dir.path() / "sweep.json") << doc.dump();
  CHECK(run("sweep --manifest " + (dir.path() / "sweep.json").string() + " --parallel 2") == 0);
  CHECK(slurp(dir.path() / "stdout.txt").find("2 runs, 2 executed, 0 failed") != std::string::npos);
  CHECK(run("sweep --manifest " + (dir.path() / "sweep.json").string() + " --resume") == 0);
  CHECK(slurp(dir.path() / "stdout.txt").find("2 runs, 0 executed, 0 failed") != std::string::npos);
  CHECK(parse_manifest(slurp(dir.path() / "sweep.json")).results.size() == 2);

  CHECK(run("frobnicate") != 0);
}
#endif
