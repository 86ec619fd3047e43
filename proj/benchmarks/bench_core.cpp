#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "effheis/effheis.hpp"

using namespace effheis;

namespace {

ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix a(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const double re = gauss(rng);
      a(r, c) = {re, gauss(rng)};
    }
  return 0.5 * (a + a.adjoint());
}

SplitHamiltonian hopping_model(std::size_t n, double lambda) {
  std::vector<double> w;
  for (std::size_t j = 1; j <= n; ++j) w.push_back(static_cast<double>(j));
  return {diagonal_modes(w), hopping(n, 1, n, 1.0), lambda};
}

void BM_HermitianEigen(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const ComplexMatrix m = random_hermitian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigendecompose(m));
}
BENCHMARK(BM_HermitianEigen)->Arg(4)->Arg(16)->Arg(36)->Arg(64);

void BM_MatrixExponential(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const ComplexMatrix m = kI * random_hermitian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exponential(m));
}
BENCHMARK(BM_MatrixExponential)->Arg(4)->Arg(16)->Arg(64);

void BM_EffectivePropagator(benchmark::State& state) {
  const MomentModel model = make_moment_model(hopping_model(2, 0.1), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(effective_propagator(model, 1.0));
}
BENCHMARK(BM_EffectivePropagator)->Arg(1)->Arg(2)->Arg(3);

void BM_MuKQuadrature(benchmark::State& state) {
  const MomentModel model = make_moment_model(hopping_model(2, 0.1), 1);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mu_k_quadrature(model, k, 1.0, 32));
}
BENCHMARK(BM_MuKQuadrature)->Arg(1)->Arg(2)->Arg(3);

void BM_TimeLocalIntegration(benchmark::State& state) {
  const MomentModel model = make_moment_model(hopping_model(2, 0.1), 1);
  const TimeLocalGenerator gen = kappa12(model);
  const TimeGrid grid(2.0, 200);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_time_local(gen, 2, grid));
}
BENCHMARK(BM_TimeLocalIntegration);

}  // namespace

BENCHMARK_MAIN();
