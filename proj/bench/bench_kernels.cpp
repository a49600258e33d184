// OpenMP kernels against their serial references.

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "pathent/fock.hpp"
#include "pathent/kernels.hpp"
#include "pathent/stats.hpp"
#include "pathent/witness.hpp"

namespace {

using namespace pathent;

Matrix random_density(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

template <bool Serial>
void BM_LocalChannel(benchmark::State& state) {
  const FockTruncation trunc(static_cast<int>(state.range(0)));
  const ModeLayout layout(2, trunc);
  const Matrix rho = random_density(layout.total_dim(), 7);
  const std::vector<Matrix> kraus = loss_kraus(0.6, trunc);
  for (auto _ : state) {
    Matrix out = Serial ? kernels::serial::apply_local_channel(rho, layout, 1, kraus)
                        : kernels::apply_local_channel(rho, layout, 1, kraus);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Serial>
void BM_GridMaximize(benchmark::State& state) {
  const JointClickProbabilities jp{0.96142, 0.01881, 0.01977, 0.0000059};
  const MultiphotonBounds mb{3.2e-6, 1.25e-5};
  const kernels::Objective2d f = [&](double a1, double a2) { return substituted_bound(a1, a2, jp, mb); };
  const kernels::Box box{0.812, 0.824, 0.830, 0.843};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto best = Serial ? kernels::serial::grid_maximize(f, box, n, n) : kernels::grid_maximize(f, box, n, n);
    benchmark::DoNotOptimize(best.value);
  }
}

void BM_SampleBatch(benchmark::State& state) {
  const JointClickProbabilities jp{0.2575, 0.2504, 0.2370, 0.2551};
  for (auto _ : state) {
    auto out = sample_counts_batch(jp, 100000, 1, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_LocalChannel<true>)->Name("local_channel/serial")->Arg(6)->Arg(10)->Arg(14);
BENCHMARK(BM_LocalChannel<false>)->Name("local_channel/openmp")->Arg(6)->Arg(10)->Arg(14);
BENCHMARK(BM_GridMaximize<true>)->Name("grid_maximize/serial")->Arg(101)->Arg(401);
BENCHMARK(BM_GridMaximize<false>)->Name("grid_maximize/openmp")->Arg(101)->Arg(401);
BENCHMARK(BM_SampleBatch)->Name("sample_counts_batch")->Arg(1000);

BENCHMARK_MAIN();
