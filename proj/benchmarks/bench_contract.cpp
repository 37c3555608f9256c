#include "tn/contract.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace tn;

namespace {

void BM_contract_mps_transfer(benchmark::State &state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  Tensor env = Tensor::random(ScalarKind::RealF64, {m, 5, m}, rng);
  Tensor site = Tensor::random(ScalarKind::RealF64, {m, 2, m}, rng);
  Tensor w = Tensor::random(ScalarKind::RealF64, {5, 2, 2, 5}, rng);
  for (auto _ : state) {
    Tensor t = contract(env, {3}, site, {1});
    t = contract(t, {2, 3}, w, {1, 3});
    t = contractc({3, 2, 1}, t, {1, 3}, site, {1, 2});
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_contract_reordered(benchmark::State &state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  Tensor a = Tensor::random(ScalarKind::ComplexF64, {d, d, d}, rng);
  Tensor b = Tensor::random(ScalarKind::ComplexF64, {d, d, d}, rng);
  for (auto _ : state) {
    Tensor c = contract({2, 1}, a, {3, 2}, b, {1, 3});
    benchmark::DoNotOptimize(c);
  }
}

void BM_permute_rank4(benchmark::State &state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  Tensor t = Tensor::random(ScalarKind::RealF64, {d, d, d, d}, rng);
  for (auto _ : state) {
    Tensor p = permute(t, {4, 2, 3, 1});
    benchmark::DoNotOptimize(p);
  }
}

} // namespace

BENCHMARK(BM_contract_mps_transfer)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_contract_reordered)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_permute_rank4)->Arg(8)->Arg(16)->Arg(32);
