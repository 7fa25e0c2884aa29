#include <random>

#include <benchmark/benchmark.h>

#include "polaron_hhg/dynamics.hpp"
#include "polaron_hhg/eigensolver.hpp"
#include "polaron_hhg/operators.hpp"
#include "polaron_hhg/spectrum.hpp"

namespace {

using namespace polaron;

ModelParams model(int cutoff) {
  ModelParams m;
  m.phonon_cutoff = cutoff;
  return m;
}

void BM_AssembleHamiltonian(benchmark::State& state) {
  const BasisIndex basis(model(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(basis));
  state.counters["dim"] = static_cast<double>(basis.dim());
}
BENCHMARK(BM_AssembleHamiltonian)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_MatVec(benchmark::State& state) {
  const BasisIndex basis(model(static_cast<int>(state.range(0))));
  const SparseOperator h = build_hamiltonian(basis);
  Eigen::VectorXd x = Eigen::VectorXd::Random(h.dim());
  Eigen::VectorXd y(h.dim());
  for (auto _ : state) {
    h.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * h.nnz());
}
BENCHMARK(BM_MatVec)->Arg(3)->Arg(4)->Arg(5);

void BM_Eigensolve(benchmark::State& state) {
  const BasisIndex basis(model(static_cast<int>(state.range(0))));
  const SparseOperator h = build_hamiltonian(basis);
  EigensolverOptions options;
  options.dense_threshold = state.range(1) ? h.dim() : 0;
  for (auto _ : state) benchmark::DoNotOptimize(eigensolve_lowest(h, 64, options));
}
BENCHMARK(BM_Eigensolve)
    ->ArgNames({"L", "dense"})
    ->Args({2, 1})
    ->Args({2, 0})
    ->Args({3, 0})
    ->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const Index nr = state.range(0);
  EigenBasis eig;
  eig.energies = Eigen::VectorXd::LinSpaced(nr, 0.0, 0.02);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd t(nr, nr);
  for (Index i = 0; i < nr; ++i) {
    for (Index j = 0; j <= i; ++j) t(i, j) = t(j, i) = dist(rng);
  }
  eig.transition = t;
  eig.gs_transition = t.row(0).transpose();
  PropagationConfig cfg;
  cfg.n_steps = 4096;
  cfg.record_stride = 4096;
  LaserParams laser;
  laser.a0 = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(propagate(eig, laser, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.n_steps);
}
BENCHMARK(BM_Propagate)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> dist;
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = dist(rng);
  for (auto _ : state) benchmark::DoNotOptimize(yield_spectrum(x, 1.0, 0.01));
}
BENCHMARK(BM_Spectrum)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
