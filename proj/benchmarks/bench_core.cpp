#include <benchmark/benchmark.h>

#include "arbor/ball.hpp"
#include "arbor/hecke.hpp"
#include "arbor/perm_group.hpp"
#include "arbor/permutation.hpp"

using namespace arbor;

namespace {

PermGroup frobenius20() {
  return PermGroup(5, {parse_cycles("(1 2 3 4 5)", 5), parse_cycles("(2 3 5 4)", 5)});
}

void BM_GroupClosure(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::vector<Permutation> gens = PermGroup::symmetric(n).generators();
  for (auto _ : state) {
    PermGroup g(n, gens);
    benchmark::DoNotOptimize(g.order());
  }
}
BENCHMARK(BM_GroupClosure)->Arg(5)->Arg(6)->Arg(7);

void BM_BallGroup(benchmark::State& state) {
  int radius = static_cast<int>(state.range(0));
  PermGroup s3 = PermGroup::symmetric(3);
  ColouredBall ball = build_ball(3, radius);
  for (auto _ : state) {
    auto group = ball_group(ball, s3);
    benchmark::DoNotOptimize(group.size());
  }
}
BENCHMARK(BM_BallGroup)->Arg(2)->Arg(3);

void BM_CornerDimension(benchmark::State& state) {
  PermGroup s4 = PermGroup::symmetric(4);
  PermGroup d4(4, {parse_cycles("(1 2 3 4)", 4), parse_cycles("(1 3)", 4)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(corner_dimension(s4, d4));
  }
}
BENCHMARK(BM_CornerDimension);

void BM_DoubleCosets(benchmark::State& state) {
  PermGroup s5 = PermGroup::symmetric(5);
  PermGroup f20 = frobenius20();
  for (auto _ : state) {
    DoubleCosets dc = double_cosets(s5, f20, f20);
    benchmark::DoNotOptimize(dc.count());
  }
}
BENCHMARK(BM_DoubleCosets);

void BM_SphereOrbits(benchmark::State& state) {
  PermGroup c3(3, {parse_cycles("(1 2 3)", 3)});
  ColouredBall ball = build_ball(3, 3);
  std::vector<BallAutomorphism> group = ball_group(ball, c3);
  for (auto _ : state) {
    auto orbits = sphere_orbits(ball, group, 3);
    benchmark::DoNotOptimize(orbits.size());
  }
}
BENCHMARK(BM_SphereOrbits);

}  // namespace

BENCHMARK_MAIN();
