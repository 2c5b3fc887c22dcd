#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "gopt/exact_lp.hpp"
#include "gopt/mopt.hpp"
#include "gopt/sinkhorn.hpp"

namespace {

using namespace gopt;

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
};

Matrix random_cost(SplitMix64& rng, int n, int m, double hi) {
  Matrix out(n, m);
  for (double& x : out.data()) x = rng.uniform(0.0, hi);
  return out;
}

std::vector<double> random_masses(SplitMix64& rng, int n) {
  std::vector<double> out(n);
  for (double& x : out) x = rng.uniform(0.5, 1.5);
  return out;
}

GoptProblem random_problem(int n, int m, PenaltyKind kind) {
  SplitMix64 rng(7u + n * 131u + m);
  std::vector<double> l1(n), l2(m);
  for (double& x : l1) x = rng.uniform(0.0, 3.0);
  for (double& x : l2) x = rng.uniform(0.0, 3.0);
  return GoptProblem(CostMatrix::from_matrix(random_cost(rng, n, m, 5.0)),
                     DiscreteMeasure(random_masses(rng, n)), DiscreteMeasure(random_masses(rng, m)),
                     l1, l2, kind, kind);
}

void BM_BalancedNetworkSimplex(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitMix64 rng(42u + n);
  const Matrix cost = random_cost(rng, n, n, 10.0);
  std::vector<double> p = random_masses(rng, n), q = random_masses(rng, n);
  double sp = 0.0, sq = 0.0;
  for (double x : p) sp += x;
  for (double x : q) sq += x;
  for (double& x : q) x *= sp / sq;
  const BalancedOtProblem problem(cost, p, q);
  for (auto _ : state) benchmark::DoNotOptimize(solve_balanced_ot(problem));
}
BENCHMARK(BM_BalancedNetworkSimplex)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_GoptLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GoptProblem problem = random_problem(n, n, PenaltyKind::PTV);
  for (auto _ : state) benchmark::DoNotOptimize(solve_gopt_lp(problem));
}
BENCHMARK(BM_GoptLp)->Arg(16)->Arg(32)->Arg(64);

void BM_Sinkhorn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GoptProblem problem = random_problem(n, n, PenaltyKind::TV);
  EntropicConfig config;
  config.epsilon = 1.0 / static_cast<double>(state.range(1));
  config.tol = 1e-9;
  config.max_iters = 100000;
  for (auto _ : state) benchmark::DoNotOptimize(solve_egopt(problem, config));
}
BENCHMARK(BM_Sinkhorn)->Args({16, 10})->Args({64, 10})->Args({16, 100})->Args({64, 100});

void BM_Dykstra(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitMix64 rng(9u + n);
  std::vector<double> p = random_masses(rng, n), q = random_masses(rng, n);
  double sp = 0.0, sq = 0.0;
  for (double x : p) sp += x;
  for (double x : q) sq += x;
  const MoptProblem problem(CostMatrix::from_matrix(random_cost(rng, n, n, 5.0)), p, q,
                            0.5 * std::min(sp, sq));
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_emopt_dykstra(problem, 0.05, 50000, 1e-8));
}
BENCHMARK(BM_Dykstra)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
