#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "orthotour/geometry.hpp"
#include "orthotour/instances.hpp"
#include "orthotour/mountain_range.hpp"
#include "orthotour/oracle.hpp"
#include "orthotour/solver_general.hpp"
#include "orthotour/solver_orthoconvex.hpp"
#include "orthotour/solver_rectangles.hpp"
#include "orthotour/solver_stepdisjoint.hpp"

using namespace orthotour;

static void BM_oracle_2d(benchmark::State& state) {
  Instance inst = gen_random(InstanceClass::kGeneral, 8 * state.range(0),
                             std::size_t(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_oracle_2d(inst).length);
}
BENCHMARK(BM_oracle_2d)->Arg(4)->Arg(8);

static void BM_solve_general(benchmark::State& state) {
  Instance inst = gen_random(InstanceClass::kGeneral, 8 * state.range(0),
                             std::size_t(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_general(inst).length);
}
BENCHMARK(BM_solve_general)->Arg(8)->Arg(32)->Arg(128);

static void BM_solve_rectangles(benchmark::State& state) {
  Instance inst = gen_random(InstanceClass::kRectangles, 0,
                             std::size_t(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_rectangles(inst).length);
}
BENCHMARK(BM_solve_rectangles)->Range(1 << 10, 1 << 20);

static void BM_solve_orthoconvex(benchmark::State& state) {
  Instance inst = gen_random(InstanceClass::kOrthoConvex,
                             std::size_t(state.range(0)), 64, 4);
  state.counters["n"] = double(inst.total_vertices());
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_orthoconvex(inst).length);
}
BENCHMARK(BM_solve_orthoconvex)->Range(1 << 12, 1 << 17);

static void BM_solve_stepdisjoint(benchmark::State& state) {
  Instance inst = gen_random(InstanceClass::kStepDisjoint,
                             std::size_t(state.range(0)), 8, 5);
  StepDisjointOptions opt;
  opt.force_dense = state.range(1) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_stepdisjoint(inst, opt).length);
}
BENCHMARK(BM_solve_stepdisjoint)
    ->Args({200, 0})
    ->Args({200, 1})
    ->Args({600, 0})
    ->Args({600, 1});

static void BM_rect_partition(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<Coord> coord(0, Coord{1} << 20);
  std::vector<Point2> pts(std::size_t(state.range(0)));
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  for (auto _ : state) {
    RectPartition rp = build_rect_partition(pts);
    benchmark::DoNotOptimize(rp.rects.size());
  }
}
BENCHMARK(BM_rect_partition)->Range(1 << 10, 1 << 16);

static void BM_mountain_relax(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Length> g(-3000, 3000);
  for (auto _ : state) {
    MountainStore ms(9);
    auto h = ms.new_zero(0, state.range(0));
    for (int i = 0; i < 256; ++i) h = ms.relax(h, i % 2 ? 1 : -1, g(rng));
    benchmark::DoNotOptimize(ms.min_over_domain(h).first);
  }
}
BENCHMARK(BM_mountain_relax)->Range(1 << 8, 1 << 14);

BENCHMARK_MAIN();
