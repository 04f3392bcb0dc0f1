#include <benchmark/benchmark.h>

#include "torembed/embed_local.hpp"
#include "torembed/family.hpp"
#include "torembed/kernels.hpp"
#include "torembed/search.hpp"
#include "torembed/sha.hpp"

using namespace torembed;

namespace {

const Int kPrimes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67};

// k components Q(sqrt p_i) with d = p_{i+k}; the Frobenius basis has 2k generators.
EtaleAlgebra wide_algebra(int k) {
  EtaleAlgebra E;
  for (int i = 0; i < k; ++i) E.components.push_back(Component::quad(BaseField{kPrimes[i]}, Rat(kPrimes[i + k])));
  return validate(E);
}

CharTable table_for(int k) {
  const EtaleAlgebra E = wide_algebra(k);
  return char_table(E, frob_basis(E));
}

void BM_PatternScanSerial(benchmark::State& state) {
  const CharTable t = table_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scan_patterns_serial(t));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << t.t));
}

void BM_PatternScanParallel(benchmark::State& state) {
  const CharTable t = table_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scan_patterns_parallel(t));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << t.t));
}

void BM_LocalScan(benchmark::State& state, bool parallel) {
  const EtaleAlgebra E = wide_algebra(static_cast<int>(state.range(0)));
  const InvolutionAlgebra A{OrthSplit{twisted_trace_form(E, Rat(29))}};
  for (auto _ : state) benchmark::DoNotOptimize(local_scan(E, A, parallel));
}

void BM_Search(benchmark::State& state, bool parallel) {
  SearchConfig cfg;
  cfg.family = GridFamily::ThreeSubfield;
  cfg.params = {{"a", {17}}, {"b", {89}}, {"c", {}}};
  for (int c = 2; c <= 40; ++c) cfg.params["c"].push_back(c);
  cfg.workers = 4;
  for (auto _ : state) benchmark::DoNotOptimize(parallel ? search_parallel(cfg) : search_serial(cfg));
}

}  // namespace

BENCHMARK(BM_PatternScanSerial)->DenseRange(4, 8, 2);
BENCHMARK(BM_PatternScanParallel)->DenseRange(4, 8, 2);
BENCHMARK_CAPTURE(BM_LocalScan, serial, false)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(BM_LocalScan, parallel, true)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(BM_Search, serial, false);
BENCHMARK_CAPTURE(BM_Search, parallel, true);

BENCHMARK_MAIN();
