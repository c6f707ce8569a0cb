#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtf/config.hpp"
#include "qtf/run.hpp"
#include "qtf/sweep.hpp"
#include "qtf/verification.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// QTF_THREADS wins over --threads.
int resolve_threads(int cli) {
  if (const char* env = std::getenv("QTF_THREADS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw std::runtime_error("QTF_THREADS must be a positive integer");
    return static_cast<int>(n);
  }
  return cli;
}

int simulate(const std::string& config_path, const std::string& out_dir, int threads) {
  qtf::RunConfig config = qtf::parse_config(read_file(config_path));
  if (!out_dir.empty()) config.output_dir = out_dir;
  const qtf::RunSummary s = qtf::run_single(config, {.log = &std::cerr, .threads = threads});
  std::cout << qtf::summary_to_json(s) << '\n';
  return s.complete ? 0 : 1;
}

int sweep(const std::string& manifest_path, int parallel, bool resume, int threads) {
  const qtf::SweepManifest in = qtf::parse_manifest(read_file(manifest_path));
  const qtf::SweepManifest out = qtf::run_sweep(
      in, {.parallelism = parallel, .resume = resume, .threads = threads, .log = &std::cerr});

  // Write results back next to the input so a later --resume can use them.
  const std::string tmp = manifest_path + ".tmp";
  std::ofstream(tmp) << qtf::manifest_to_json(out) << '\n';
  std::filesystem::rename(tmp, manifest_path);

  std::size_t ran = 0, failed = 0;
  for (const auto& r : out.results) {
    ran += r.reused ? 0 : 1;
    failed += r.status == "ok" ? 0 : 1;
  }
  std::cout << out.results.size() << " runs, " << ran << " executed, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

int verify() {
  bool ok = true;
  for (const auto& r : qtf::run_verification(&std::cout)) ok = ok && r.passed;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-tensor / Navier-Stokes simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, manifest_path;
  int threads = 1, parallel = 1;
  bool resume = false;

  auto* sim = app.add_subcommand("simulate", "Run one configuration");
  sim->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  sim->add_option("--threads", threads, "Threads for cell loops")->check(CLI::PositiveNumber);

  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep");
  sw->add_option("--manifest", manifest_path, "JSON sweep manifest")->required()->check(CLI::ExistingFile);
  sw->add_option("--parallel", parallel, "Concurrent runs")->check(CLI::PositiveNumber);
  sw->add_flag("--resume", resume, "Skip runs that already completed");
  sw->add_option("--threads", threads, "Threads per run")->check(CLI::PositiveNumber);

  auto* ver = app.add_subcommand("verify", "Run the algebraic and operator property checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return simulate(config_path, out_dir, resolve_threads(threads));
    if (*sw) return sweep(manifest_path, parallel, resume, resolve_threads(threads));
    if (*ver) return verify();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
