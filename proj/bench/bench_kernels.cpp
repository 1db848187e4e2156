#include <benchmark/benchmark.h>

#include "typmatch/graphgen.hpp"
#include "typmatch/matcher.hpp"
#include "typmatch/oracle.hpp"
#include "typmatch/rng.hpp"

using namespace typmatch;

namespace {

PairedEdgeModel sbm() {
  return PairedEdgeModel::assortative(2, JointPmf::dsbs(0.1), JointPmf::dsbs(0.3));
}

void BM_SamplePair(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto layout = CommunityLayout::from_sizes({n / 2, n - n / 2});
  const auto model = sbm();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_pair(model, layout, ++seed));
}

void BM_SamplePairSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto layout = CommunityLayout::from_sizes({n / 2, n - n / 2});
  const auto model = sbm();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(reference::sample_pair(model, layout, ++seed));
}

AnonymizedPair instance(std::size_t n) {
  const auto layout = CommunityLayout::from_sizes({n / 2, n - n / 2});
  return anonymize(sample_pair(sbm(), layout, 11), MatchMode::csi, 12);
}

void BM_Csi(benchmark::State& state) {
  const auto pair = instance(static_cast<std::size_t>(state.range(0)));
  MatcherOptions options;
  options.eps = 0.2;
  options.parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(ambiguity_set_csi(pair.instance, options));
}

void BM_CsiReference(benchmark::State& state) {
  const auto pair = instance(static_cast<std::size_t>(state.range(0)));
  MatcherOptions options;
  options.eps = 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(reference::ambiguity_set_csi(pair.instance, options));
}

void BM_ExactOracle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = oracle::RationalPmf::dsbs(oracle::Rational(1, 10));
  const auto pi = random_permutation(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        oracle::exact_typicality_probability(p, n, Permutation::identity(n), pi, oracle::Rational(1, 4)));
  }
}

void BM_ExactOracleReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = oracle::RationalPmf::dsbs(oracle::Rational(1, 10));
  const auto pi = random_permutation(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::reference::exact_typicality_probability(
        p, n, Permutation::identity(n), pi, oracle::Rational(1, 4)));
  }
}

}  // namespace

BENCHMARK(BM_SamplePair)->Arg(64)->Arg(512)->Arg(2048);
BENCHMARK(BM_SamplePairSerial)->Arg(64)->Arg(512)->Arg(2048);
BENCHMARK(BM_Csi)->Args({8, 0})->Args({8, 1})->Args({10, 0})->Args({10, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CsiReference)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactOracle)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactOracleReference)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
