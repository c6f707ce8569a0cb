#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "qtf/coupled_stepper.hpp"
#include "qtf/fluid_solver.hpp"
#include "qtf/initial_conditions.hpp"
#include "qtf/parallel.hpp"

namespace {

qtf::SimState smooth_state(const qtf::DomainSpec& d) {
  qtf::SimState s = qtf::SimState::zero(d);
  s.Q = qtf::random_smooth_q(d, 1, 0.1, 3);
  s.u = qtf::random_smooth_u(d, 1, 0.1, 3);
  return s;
}

qtf::DomainSpec cube(int n, bool box) {
  return qtf::DomainSpec::cube(n, 2.0 * std::numbers::pi, box ? qtf::BoundaryKind::Box : qtf::BoundaryKind::Periodic);
}

// args: cells per axis, Box (1) or periodic (0), threads
void BM_Step(benchmark::State& state) {
  qtf::set_thread_count(static_cast<int>(state.range(2)));
  const qtf::SimState s = smooth_state(cube(static_cast<int>(state.range(0)), state.range(1) != 0));
  qtf::ModelParams p;
  p.b = 0.5;
  for (auto _ : state) {
    auto r = qtf::step(s, 1e-3, p, {.with_monitor = false});
    benchmark::DoNotOptimize(r.state.Q);
  }
  qtf::set_thread_count(1);
}
BENCHMARK(BM_Step)
    ->Args({16, 0, 1})
    ->Args({32, 0, 1})
    ->Args({32, 0, 4})
    ->Args({16, 1, 1})
    ->Args({32, 1, 1})
    ->Unit(benchmark::kMillisecond);

void BM_ElasticForce(benchmark::State& state) {
  const qtf::SimState s = smooth_state(cube(static_cast<int>(state.range(0)), state.range(1) != 0));
  for (auto _ : state) benchmark::DoNotOptimize(qtf::assemble_elastic_force(s.Q, qtf::ModelParams{}));
}
BENCHMARK(BM_ElasticForce)->Args({32, 0})->Args({32, 1})->Unit(benchmark::kMillisecond);

void BM_BoxProjection(benchmark::State& state) {
  const qtf::DomainSpec d = cube(static_cast<int>(state.range(0)), true);
  qtf::VelocityField u(d);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (std::size_t c = 0; c < 3; ++c)
    for (double& v : u.component(c)) v = normal(rng);
  int iters = 0;
  for (auto _ : state) {
    auto p = qtf::leray_project(u);
    iters = p.iterations;
    benchmark::DoNotOptimize(p.velocity);
  }
  state.counters["cg_iters"] = iters;
}
BENCHMARK(BM_BoxProjection)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Monitor(benchmark::State& state) {
  const qtf::SimState s = smooth_state(cube(static_cast<int>(state.range(0)), false));
  for (auto _ : state) benchmark::DoNotOptimize(qtf::sobolev_monitor(s.u, s.Q, qtf::ModelParams{}));
}
BENCHMARK(BM_Monitor)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
