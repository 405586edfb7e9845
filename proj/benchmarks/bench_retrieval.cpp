#include <benchmark/benchmark.h>

#include "credo/bm25.hpp"
#include "credo/rake.hpp"
#include "credo/synthetic.hpp"

namespace {

credo::SyntheticDataset corpus(std::size_t claims) {
  credo::SyntheticConfig cfg;
  cfg.claims = claims;
  return credo::generate_synthetic(cfg, 1);
}

void BM_BuildIndex(benchmark::State& state) {
  auto data = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(credo::build_index(data.kb));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(data.kb.size()));
}
BENCHMARK(BM_BuildIndex)->Arg(100)->Arg(500);

void BM_Retrieve(benchmark::State& state) {
  auto data = corpus(static_cast<std::size_t>(state.range(0)));
  auto index = credo::build_index(data.kb);
  const auto& stop = credo::default_stopwords();
  std::size_t i = 0;
  for (auto _ : state) {
    auto kws = credo::extract_keywords(data.claims[i++ % data.claims.size()].text, stop, 10);
    benchmark::DoNotOptimize(credo::retrieve(kws, index, 5));
  }
}
BENCHMARK(BM_Retrieve)->Arg(100)->Arg(500);

void BM_ExtractKeywords(benchmark::State& state) {
  auto data = corpus(50);
  const auto& stop = credo::default_stopwords();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(credo::extract_keywords(data.kb[i++ % data.kb.size()].text, stop, 10));
  }
}
BENCHMARK(BM_ExtractKeywords);

}  // namespace
