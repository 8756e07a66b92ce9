// Serial vs OpenMP timings for the two hot kernels.
#include <benchmark/benchmark.h>

#include "sulfex/clustering.hpp"
#include "sulfex/numkernel.hpp"
#include "sulfex/random.hpp"

using namespace sulfex;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.entries()) v = rng.normal();
  return m;
}

void BM_gram(benchmark::State& state) {
  const Matrix x = random_matrix(state.range(0), 32, 1);
  for (auto _ : state) benchmark::DoNotOptimize(num::gram(x));
}

void BM_gram_serial(benchmark::State& state) {
  const Matrix x = random_matrix(state.range(0), 32, 1);
  for (auto _ : state) benchmark::DoNotOptimize(num::gram_serial(x));
}

void BM_assign(benchmark::State& state) {
  const Matrix x = random_matrix(state.range(0), 4, 2);
  const Matrix c = random_matrix(8, 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cluster::assign_step(x, c));
}

void BM_assign_serial(benchmark::State& state) {
  const Matrix x = random_matrix(state.range(0), 4, 2);
  const Matrix c = random_matrix(8, 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cluster::assign_step_serial(x, c));
}

}  // namespace

BENCHMARK(BM_gram)->Arg(1000)->Arg(20000);
BENCHMARK(BM_gram_serial)->Arg(1000)->Arg(20000);
BENCHMARK(BM_assign)->Arg(10000)->Arg(200000);
BENCHMARK(BM_assign_serial)->Arg(10000)->Arg(200000);

BENCHMARK_MAIN();
