#include "credo/textrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "credo/error.hpp"

namespace credo {

SentenceGraph sentence_graph(std::span<const Sentence> sentences, Bm25Params params) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(sentences.size());
  for (const auto& s : sentences) {
    std::vector<std::string> terms;
    for (const auto& t : s.tokens) terms.push_back(t.surface);
    docs.push_back(std::move(terms));
  }
  auto index = InvertedIndex::from_token_lists(docs, params);

  const std::size_t m = sentences.size();
  SentenceGraph g;
  g.size = m;
  g.weights.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double w = 0.5 * (index.score(docs[i], j) + index.score(docs[j], i));
      g.weights[i * m + j] = w;
      g.weights[j * m + i] = w;
    }
  }
  return g;
}

TextRankResult textrank(const SentenceGraph& graph, const SummaryConfig& config) {
  const std::size_t m = graph.size;
  if (m == 0) throw ValidationError("textrank needs at least one sentence");
  const double d = config.damping;
  const double uniform_mass = 1.0 / static_cast<double>(m);

  std::vector<double> out_weight(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) out_weight[j] += graph.weight(j, k);
  }

  TextRankResult result;
  std::vector<double> current(m, uniform_mass);
  std::vector<double> next(m);
  for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
    double dangling = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (out_weight[j] <= 0.0) dangling += current[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      double incoming = dangling * uniform_mass;
      for (std::size_t j = 0; j < m; ++j) {
        if (out_weight[j] > 0.0) incoming += graph.weight(j, i) / out_weight[j] * current[j];
      }
      next[i] = (1.0 - d) * uniform_mass + d * incoming;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) change = std::max(change, std::abs(next[i] - current[i]));
    current.swap(next);
    result.iterations = iter + 1;
    if (change < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(current);
  return result;
}

std::vector<std::size_t> select_sentences(std::span<const std::size_t> lengths,
                                          std::span<const double> scores,
                                          std::size_t target_chars, double length_slack) {
  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const double budget = length_slack * static_cast<double>(target_chars);
  std::vector<std::size_t> kept;
  std::size_t used = 0;
  for (std::size_t idx : order) {
    std::size_t extra = lengths[idx] + (kept.empty() ? 0 : 1);
    if (!kept.empty() && static_cast<double>(used + extra) > budget) break;
    kept.push_back(idx);
    used += extra;
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::string summarize(const KbDocument& doc, std::size_t target_chars,
                      const SummaryConfig& config, Bm25Params params) {
  if (target_chars == 0) throw ValidationError("target_chars must be at least 1");
  if (doc.text.size() <= target_chars) return doc.text;

  auto sentences = split_sentences(doc.text);
  if (sentences.empty()) return {};
  auto ranks = textrank(sentence_graph(sentences, params), config);

  std::vector<std::size_t> lengths;
  for (const auto& s : sentences) lengths.push_back(s.text.size());
  auto kept = select_sentences(lengths, ranks.scores, target_chars, config.length_slack);

  std::string out;
  for (std::size_t idx : kept) {
    if (!out.empty()) out.push_back(' ');
    out += sentences[idx].text;
  }
  return out;
}

}  // namespace credo
