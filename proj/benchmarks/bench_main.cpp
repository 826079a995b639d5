#include <benchmark/benchmark.h>

#include "cftower/biquad_field.hpp"
#include "cftower/chebotarev.hpp"
#include "cftower/nprime.hpp"
#include "cftower/quad_field.hpp"
#include "cftower/tower.hpp"

namespace {

using namespace cft;

void BM_SievePrimes1Mod8(benchmark::State& state) {
  const auto budget = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sieve_primes_1_mod_8(budget));
}
BENCHMARK(BM_SievePrimes1Mod8)->Arg(10000)->Arg(1000000);

void BM_SqrtModP(benchmark::State& state) {
  const auto primes = sieve_primes_1_mod_8(200000).primes;
  std::size_t k = 0;
  for (auto _ : state) {
    const u64 p = primes[k++ % primes.size()];
    benchmark::DoNotOptimize(legendre_symbol(17, p) == 1 ? sqrt_mod_p(17, p) : 0);
  }
}
BENCHMARK(BM_SqrtModP);

void BM_FundamentalUnit(benchmark::State& state) {
  const auto d = static_cast<i64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_unit(d));
}
BENCHMARK(BM_FundamentalUnit)->Arg(1513)->Arg(7433)->Arg(94009);

void BM_UnitSquareRoot(benchmark::State& state) {
  const QuadInt e17 = fundamental_unit(17).unit;
  const QuadInt e89 = fundamental_unit(89).unit;
  const QuadInt e = normalize_at_least_one_positive(fundamental_unit(17 * 89).unit);
  for (auto _ : state) benchmark::DoNotOptimize(unit_square_root(17, 89, e17, e89, e));
}
BENCHMARK(BM_UnitSquareRoot);

void BM_EvaluatePair(benchmark::State& state) {
  for (auto _ : state) {
    UnitCache cache;
    benchmark::DoNotOptimize(evaluate_pair(17, 89, cache));
  }
}
BENCHMARK(BM_EvaluatePair);

void BM_BuildS(benchmark::State& state) {
  PipelineOptions options;
  options.workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(build_S(static_cast<u64>(state.range(0)), options));
}
BENCHMARK(BM_BuildS)->Args({200, 1})->Args({400, 1})->Args({400, 4})->Unit(benchmark::kMillisecond);

void BM_DensityScan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(density_scan(17, static_cast<u64>(state.range(0))));
}
BENCHMARK(BM_DensityScan)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_NPrimeCertificate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_nprime_certificate());
}
BENCHMARK(BM_NPrimeCertificate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
