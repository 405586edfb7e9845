#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "credo/bm25.hpp"
#include "credo/text.hpp"

namespace credo {

/// Dense symmetric similarity graph over the sentences of one document.
struct SentenceGraph {
  std::size_t size = 0;
  std::vector<double> weights;  ///< row-major size x size, zero diagonal

  double weight(std::size_t i, std::size_t j) const { return weights[i * size + j]; }
};

struct SummaryConfig {
  double damping = 0.85;
  double tolerance = 1e-6;
  std::size_t max_iters = 100;
  double length_slack = 1.2;  ///< accepted summary may reach slack * target_chars
};

/// weight(i,j) = (bm25(tokens_i -> sentence_j) + bm25(tokens_j -> sentence_i)) / 2,
/// with the document's own sentences as the BM25 corpus.
SentenceGraph sentence_graph(std::span<const Sentence> sentences, Bm25Params params = {});

struct TextRankResult {
  std::vector<double> scores;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Weighted PageRank from the uniform vector. Rows with no outgoing weight
/// spread their mass uniformly.
TextRankResult textrank(const SentenceGraph& graph, const SummaryConfig& config = {});

/// Extractive summary of roughly `target_chars` characters, sentences kept in
/// document order.
std::string summarize(const KbDocument& doc, std::size_t target_chars,
                      const SummaryConfig& config = {}, Bm25Params params = {});

/// Indices (document order) of the sentences `summarize` keeps, given their
/// lengths and TextRank scores.
std::vector<std::size_t> select_sentences(std::span<const std::size_t> lengths,
                                          std::span<const double> scores,
                                          std::size_t target_chars, double length_slack);

}  // namespace credo
