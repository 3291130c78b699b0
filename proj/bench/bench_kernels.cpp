// Indexed OpenMP kernel against the dense serial reference, on the same inputs.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "ainf/reference.hpp"
#include "fixtures.hpp"

using namespace ainf;
using namespace ainf::fixtures;

namespace {

struct Input {
  QuiverPtr quiver;
  Prenatural m;
  FormalMorphism f;
};

// Random structure and formal endomorphism on `objects` objects with homs of dimension <= dim.
Input make_input(int objects, int dim, int arity) {
  Rng rng(7);
  Input in;
  in.quiver = random_quiver(rng, objects, dim, -1, 1);
  in.m = random_structure(rng, in.quiver, Field::rationals(), arity, 6);
  in.f = random_formal(rng, in.quiver, in.quiver, Field::rationals(), arity, 6);
  return in;
}

void args(benchmark::internal::Benchmark* b) {
  for (int arity : {3, 4, 5}) b->Args({2, 3, arity});
  b->Args({3, 3, 4});
  b->Unit(benchmark::kMillisecond);
}

void BM_StructureKernel(benchmark::State& state) {
  Input in = make_input(state.range(0), state.range(1), state.range(2));
  const int n = state.range(2);
  for (auto _ : state) benchmark::DoNotOptimize(compose_prenatural(in.m, in.m, n));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_StructureReference(benchmark::State& state) {
  Input in = make_input(state.range(0), state.range(1), state.range(2));
  const int n = state.range(2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::compose_prenatural(in.m, in.m, n));
}

void BM_ComposeKernel(benchmark::State& state) {
  Input in = make_input(state.range(0), state.range(1), state.range(2));
  const int n = state.range(2);
  for (auto _ : state) benchmark::DoNotOptimize(compose_formal(in.f, in.f, n));
}

void BM_ComposeReference(benchmark::State& state) {
  Input in = make_input(state.range(0), state.range(1), state.range(2));
  const int n = state.range(2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::compose_formal(in.f, in.f, n));
}

}  // namespace

BENCHMARK(BM_StructureKernel)->Apply(args);
BENCHMARK(BM_StructureReference)->Apply(args);
BENCHMARK(BM_ComposeKernel)->Apply(args);
BENCHMARK(BM_ComposeReference)->Apply(args);

BENCHMARK_MAIN();
