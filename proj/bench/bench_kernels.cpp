#include <benchmark/benchmark.h>

#include <random>

#include "anp/kernels.hpp"
#include "anp/model_io.hpp"

using namespace anp;

namespace {

Matrix random_stochastic(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(n);
  for (std::size_t c = 0; c < n; ++c) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) total += m(r, c) = u(rng);
    for (std::size_t r = 0; r < n; ++r) m(r, c) /= total;
  }
  return m;
}

std::vector<ComparisonMatrix> random_batch(std::size_t count, std::size_t n) {
  std::mt19937_64 rng(42);
  const auto scale = saaty_scale();
  std::uniform_int_distribution<std::size_t> pick(0, scale.size() - 1);
  std::vector<ComparisonMatrix> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<PairJudgment> upper;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) upper.push_back({i, j, scale[pick(rng)]});
    out.push_back(build_matrix(n, upper));
  }
  return out;
}

void multiply_parallel(benchmark::State& state) {
  const auto a = random_stochastic(state.range(0), 1);
  const auto b = random_stochastic(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply(a, b));
}

void multiply_reference(benchmark::State& state) {
  const auto a = random_stochastic(state.range(0), 1);
  const auto b = random_stochastic(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::reference::multiply(a, b));
}

void eigenvectors_parallel(benchmark::State& state) {
  const auto batch = random_batch(state.range(0), 9);
  const auto rci = RciTable::saaty1980();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::eigenvectors(batch, rci));
}

void eigenvectors_reference(benchmark::State& state) {
  const auto batch = random_batch(state.range(0), 9);
  const auto rci = RciTable::saaty1980();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::reference::eigenvectors(batch, rci));
}

void limit_random(benchmark::State& state) {
  Supermatrix w;
  w.entries = random_stochastic(state.range(0), 3);
  for (int i = 0; i < state.range(0); ++i) {
    w.index.push_back("n" + std::to_string(i));
    w.clusters.push_back("c");
  }
  w.state = SupermatrixState::weighted;
  for (auto _ : state) benchmark::DoNotOptimize(limit(w));
}

void solve_kwic(benchmark::State& state) {
  const auto net = load_file(std::string(ANP_BENCH_DATA_DIR) + "/kwic.anp.json").network();
  for (auto _ : state) benchmark::DoNotOptimize(solve(net));
}

}  // namespace

BENCHMARK(multiply_parallel)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(multiply_reference)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(eigenvectors_parallel)->Arg(16)->Arg(256);
BENCHMARK(eigenvectors_reference)->Arg(16)->Arg(256);
BENCHMARK(limit_random)->Arg(64)->Arg(256);
BENCHMARK(solve_kwic);

BENCHMARK_MAIN();
