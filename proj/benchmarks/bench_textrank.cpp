#include <benchmark/benchmark.h>

#include "credo/random.hpp"
#include "credo/textrank.hpp"

namespace {

credo::SentenceGraph random_graph(std::size_t m) {
  credo::Rng rng(3);
  credo::SentenceGraph g;
  g.size = m;
  g.weights.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double w = credo::bernoulli(rng, 0.5) ? credo::uniform(rng, 0.0, 3.0) : 0.0;
      g.weights[i * m + j] = w;
      g.weights[j * m + i] = w;
    }
  }
  return g;
}

void BM_TextRank(benchmark::State& state) {
  auto g = random_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(credo::textrank(g));
}
BENCHMARK(BM_TextRank)->Arg(10)->Arg(50)->Arg(200);

void BM_Summarize(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) {
    text += "Sentence " + std::to_string(i) + " mentions the harbour council and budget " +
            std::to_string(i % 7) + ". ";
  }
  credo::KbDocument doc{"d", "", text, "https://x.org", std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(credo::summarize(doc, 200));
}
BENCHMARK(BM_Summarize)->Arg(10)->Arg(40);

}  // namespace
