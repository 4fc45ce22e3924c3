#include <benchmark/benchmark.h>

#include "hyperpursuit/engagement.hpp"
#include "hyperpursuit/evader.hpp"
#include "hyperpursuit/linearize.hpp"
#include "hyperpursuit/lqdg.hpp"
#include "hyperpursuit/reference.hpp"
#include "hyperpursuit/verification.hpp"

namespace hp = hyperpursuit;

namespace {

const hp::VehicleParams kParams;
const hp::AtmosphereParams kAtmos;
const hp::GameConfig kGame;
const hp::PursuerState kPursuer{-50000.0, 20000.0, 4000.0, -0.4};
const hp::TargetState kTarget{0.0, 0.0};

hp::ReferenceSolution solve(std::size_t nodes) {
  hp::TranscriptionConfig tc;
  tc.n_nodes = nodes;
  return hp::solve_min_time_intercept(kPursuer, kTarget, hp::oles(kPursuer.position(), kTarget),
                                      kParams, kAtmos, kGame, tc);
}

const hp::ReferenceSolution& reference() {
  static const hp::ReferenceSolution sol = solve(100);
  return sol;
}

hp::LtvSchedule ltv_at(double dt) {
  const auto& sol = reference();
  return hp::build_ltv(sol, kParams, kAtmos, kGame, hp::TimeGrid::with_max_step(0.0, sol.t_f_star, dt));
}

void BM_ReferenceSolve(benchmark::State& state) {
  const auto nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(nodes).t_f_star);
}
BENCHMARK(BM_ReferenceSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_JacobianCompare(benchmark::State& state) {
  const auto& sol = reference();
  for (auto _ : state) benchmark::DoNotOptimize(hp::compare_jacobians(sol, kParams, kAtmos).max_rel_error);
}
BENCHMARK(BM_JacobianCompare)->Unit(benchmark::kMicrosecond);

void BM_BuildLtv(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ltv_at(0.005).a_mats.size());
}
BENCHMARK(BM_BuildLtv)->Unit(benchmark::kMillisecond);

void BM_SolveMrde(benchmark::State& state) {
  const auto ltv = ltv_at(0.005);
  const hp::Weights w;
  const auto q = hp::build_Q(w);
  hp::RiccatiOptions opts;
  opts.max_step = 1e-6 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hp::solve_mrde(ltv, q, w, opts).p_mats.size());
}
BENCHMARK(BM_SolveMrde)->Arg(500)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_Engagement(benchmark::State& state) {
  const auto ltv = ltv_at(0.005);
  const hp::Weights w;
  const auto ric = hp::solve_mrde(ltv, hp::build_Q(w), w);
  const hp::EvasionStrategy strategy{static_cast<hp::EvasionKind>(state.range(0)), 1.0, 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hp::run_engagement(reference(), ltv, ric, strategy, kParams, kAtmos, kGame).miss_distance);
  }
}
BENCHMARK(BM_Engagement)
    ->Arg(static_cast<int>(hp::EvasionKind::Optimal))
    ->Arg(static_cast<int>(hp::EvasionKind::Random))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
