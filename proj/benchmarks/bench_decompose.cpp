#include "tn/decompose.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace tn;

namespace {

void BM_svd_truncated(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  Tensor m = Tensor::random(ScalarKind::RealF64, {n, n}, rng);
  TruncationSpec spec;
  spec.max_keep = n / 2;
  spec.cutoff = 1e-10;
  for (auto _ : state) {
    SvdResult r = svd_truncated(m, spec);
    benchmark::DoNotOptimize(r);
  }
}

void BM_qr(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  Tensor m = Tensor::random(ScalarKind::RealF64, {n, n}, rng);
  for (auto _ : state) {
    QrResult r = qr_decompose(m);
    benchmark::DoNotOptimize(r);
  }
}

void BM_eigen_hermitian(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  Tensor r = Tensor::random(ScalarKind::RealF64, {n, n}, rng);
  Tensor herm = (r + permute(r, {2, 1})) * 0.5;
  for (auto _ : state) {
    EigResult e = eigen_truncated(herm);
    benchmark::DoNotOptimize(e);
  }
}

} // namespace

BENCHMARK(BM_svd_truncated)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_qr)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_eigen_hermitian)->Arg(32)->Arg(128)->Arg(256);
