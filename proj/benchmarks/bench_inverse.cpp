#include <benchmark/benchmark.h>

#include "minkinv/decomp.hpp"
#include "minkinv/ginv.hpp"
#include "minkinv/order.hpp"
#include "minkinv/verify.hpp"

using namespace minkinv;

namespace {

CMatrix sample(Index n) {
  const Index r = n / 2;
  return generate_case({n, r, 2, 17}, MinkowskiMetric(n));
}

void BM_CoreEPDecompose(benchmark::State& state) {
  const CMatrix A = sample(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(core_ep_decompose(A));
  }
}

void BM_MCoreEPBlock(benchmark::State& state) {
  const Index n = state.range(0);
  const CMatrix A = sample(n);
  const MinkowskiMetric G(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_core_ep_inverse(A, G));
  }
}

void BM_MCoreEPDrazin(benchmark::State& state) {
  const Index n = state.range(0);
  const CMatrix A = sample(n);
  const MinkowskiMetric G(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_core_ep_via_drazin(A, G));
  }
}

void BM_MCoreEPParts(benchmark::State& state) {
  const Index n = state.range(0);
  const CMatrix A = sample(n);
  const MinkowskiMetric G(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_core_ep_via_parts(A, G));
  }
}

void BM_MCoreEPOracle(benchmark::State& state) {
  const Index n = state.range(0);
  const CMatrix A = sample(n);
  const MinkowskiMetric G(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_m_core_ep(A, G));
  }
}

void BM_Minkowski(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(5);
  const CMatrix A = random_gaussian(n, n, rng);
  const MinkowskiMetric G(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(minkowski_inverse(A, G));
  }
}

void BM_OrderLeq(benchmark::State& state) {
  const Index n = state.range(0);
  const CMatrix A = sample(n);
  const MinkowskiMetric G(n);
  Rng rng(9);
  const CMatrix B = order_successor(A, random_gaussian(n - n / 2, n - n / 2, rng), G);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m_core_ep_leq(A, B, G));
  }
}

}  // namespace

BENCHMARK(BM_CoreEPDecompose)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(BM_MCoreEPBlock)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(BM_MCoreEPDrazin)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(BM_MCoreEPParts)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(BM_MCoreEPOracle)->Arg(4)->Arg(8);
BENCHMARK(BM_Minkowski)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(BM_OrderLeq)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
