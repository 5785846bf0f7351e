#include "opinf/dynamics.hpp"
#include "opinf/fom.hpp"
#include "opinf/inference.hpp"
#include "opinf/pod.hpp"
#include "opinf/quadform.hpp"
#include "opinf/stability.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace opinf;

namespace {

Matrix uniform(Index r, Index c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = d(rng);
  return m;
}

QuadraticModel stable_model(Index n, std::mt19937_64& rng) {
  const Matrix G = uniform(n, n, rng);
  return {-(G * G.transpose()) - Matrix::Identity(n, n), uniform(n, 1, rng),
          0.1 * uniform(n, quadform::compressed_size(n), rng)};
}

void BM_CompressSquare(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Matrix X = uniform(state.range(0), 1000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(quadform::compress_square_columns(X));
}
BENCHMARK(BM_CompressSquare)->Arg(4)->Arg(10)->Arg(20);

void BM_SimulateBurgersFom(benchmark::State& state) {
  const auto model = fom::build_burgers(state.range(0), 50.0);
  const Matrix U = Matrix::Constant(1, 2000, 1.0);
  const Vector x0 = Vector::Zero(model.dim());
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::simulate(model, x0, U, 1e-4));
}
BENCHMARK(BM_SimulateBurgersFom)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SimulateRom(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto model = stable_model(state.range(0), rng);
  const Matrix U = uniform(1, 2000, rng);
  const Vector x0 = uniform(model.dim(), 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::simulate(model, x0, U, 1e-3));
}
BENCHMARK(BM_SimulateRom)->Arg(4)->Arg(10)->Unit(benchmark::kMicrosecond);

inference::RegressionData rom_data(Index n, std::mt19937_64& rng) {
  const auto model = stable_model(n, rng);
  std::vector<Matrix> X;
  std::vector<Matrix> U;
  for (int i = 0; i < 10; ++i) {
    U.push_back(uniform(1, 2000, rng));
    X.push_back(dynamics::simulate(model, uniform(n, 1, rng), U.back(), 1e-3).states);
  }
  return inference::assemble(X, U, 1e-3, false);
}

void BM_FitPir(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const inference::LeastSquaresProblem problem(rom_data(state.range(0), rng));
  for (auto _ : state) benchmark::DoNotOptimize(problem.fit_pir(1e-2));
}
BENCHMARK(BM_FitPir)->Arg(4)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_ProblemSetup(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto data = rom_data(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(inference::LeastSquaresProblem(data));
}
BENCHMARK(BM_ProblemSetup)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_FitSpir(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const inference::LeastSquaresProblem problem(rom_data(state.range(0), rng));
  for (auto _ : state) benchmark::DoNotOptimize(problem.fit_spir(1e-2, 1e-10));
}
BENCHMARK(BM_FitSpir)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GalerkinReduce(benchmark::State& state) {
  std::mt19937_64 rng(6);
  const auto model = fom::build_burgers(64, 50.0);
  const Matrix V = pod::pod_basis(uniform(64, 200, rng), state.range(0)).V;
  for (auto _ : state) benchmark::DoNotOptimize(pod::galerkin_reduce(model, V));
}
BENCHMARK(BM_GalerkinReduce)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Lyapunov(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto model = stable_model(state.range(0), rng);
  const Matrix Q = Matrix::Identity(model.dim(), model.dim());
  for (auto _ : state) benchmark::DoNotOptimize(stability::solve_lyapunov(model.A, Q));
}
BENCHMARK(BM_Lyapunov)->Arg(4)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
