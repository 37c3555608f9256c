#include "tn/dmrg.hpp"

#include "builders.hpp"
#include "tn/mp_measure.hpp"

#include <benchmark/benchmark.h>

using namespace tn;

namespace {

void BM_dmrg_sweep(benchmark::State &state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const std::size_t ns = 10;
  MPO h = builders::heisenberg_mpo(ns);
  for (auto _ : state) {
    MPS psi = product_mps(2, ns, ProductState::RandomBasis, 1);
    DmrgOptions opts;
    opts.sweeps = 2;
    opts.early_stop = false;
    opts.trunc.max_keep = m;
    opts.trunc.cutoff = 1e-12;
    DmrgResult res = dmrg(psi, h, opts);
    benchmark::DoNotOptimize(res);
  }
}

void BM_expect(benchmark::State &state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const std::size_t ns = 24;
  MPO h = builders::heisenberg_mpo(ns);
  std::mt19937_64 rng(5);
  MPS psi = builders::random_mps(ns, 2, m, ScalarKind::RealF64, rng);
  for (auto _ : state) {
    cplx e = expect(psi, h);
    benchmark::DoNotOptimize(e);
  }
}

} // namespace

BENCHMARK(BM_dmrg_sweep)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_expect)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
