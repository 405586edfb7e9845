#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "credo/rake.hpp"

namespace credo {

struct KbDocument {
  std::string doc_id;
  std::string title;
  std::string text;
  std::string source_url;
  std::optional<std::string> author;

  friend bool operator==(const KbDocument&, const KbDocument&) = default;
};

/// Okapi BM25 constants. Terms with negative idf are floored to
/// epsilon * (mean of the positive idf values); when no term has positive
/// idf the mean is taken as 1.
struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  double epsilon = 0.25;

  friend bool operator==(const Bm25Params&, const Bm25Params&) = default;
};

struct Posting {
  std::size_t doc = 0;  ///< document ordinal (ordinals follow doc_id order)
  std::uint32_t tf = 0;

  friend bool operator==(const Posting&, const Posting&) = default;
};

class InvertedIndex {
 public:
  InvertedIndex() = default;

  /// Index over anonymous token lists; ordinals are list positions. Used for
  /// sentence-level BM25 inside a single document.
  static InvertedIndex from_token_lists(const std::vector<std::vector<std::string>>& docs,
                                        Bm25Params params = {});

  std::size_t document_count() const noexcept { return lengths_.size(); }
  double average_length() const noexcept { return avg_length_; }
  std::size_t length(std::size_t ordinal) const { return lengths_.at(ordinal); }
  const Bm25Params& params() const noexcept { return params_; }

  std::span<const Posting> postings(std::string_view term) const;
  std::size_t document_frequency(std::string_view term) const { return postings(term).size(); }
  std::uint32_t term_frequency(std::string_view term, std::size_t ordinal) const;

  /// Floored idf; 0 for terms absent from the index.
  double idf(std::string_view term) const;

  /// Sum over query occurrences (duplicates count) of idf * saturated tf.
  double score(std::span<const std::string> query, std::size_t ordinal) const;

  /// Scores every document at once by walking posting lists.
  std::vector<double> score_all(std::span<const std::string> query) const;

  const std::vector<KbDocument>& documents() const noexcept { return docs_; }
  const KbDocument& document(std::size_t ordinal) const { return docs_.at(ordinal); }
  std::optional<std::size_t> ordinal(std::string_view doc_id) const;

  std::size_t vocabulary_size() const noexcept { return postings_.size(); }

  friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

 private:
  friend InvertedIndex build_index(std::vector<KbDocument> corpus, Bm25Params params);
  void finalize();

  Bm25Params params_;
  std::vector<KbDocument> docs_;
  std::vector<std::size_t> lengths_;
  double avg_length_ = 0.0;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
  std::map<std::string, double, std::less<>> idf_;
};

/// Tokens indexed for a knowledge-base document: its title followed by its text.
std::vector<std::string> index_terms(const KbDocument& doc);

/// Throws IngestionError on a duplicate doc_id and ValidationError on an empty text.
InvertedIndex build_index(std::vector<KbDocument> corpus, Bm25Params params = {});

/// Throws LookupError for an unknown doc_id.
double bm25_score(std::span<const std::string> query_terms, std::string_view doc_id,
                  const InvertedIndex& index);

struct RetrievedDoc {
  KbDocument doc;
  std::size_t rank = 0;  ///< 1-based
  double bm25 = 0.0;
};

struct ResultSet {
  std::vector<RetrievedDoc> docs;
  std::size_t n() const noexcept { return docs.size(); }
};

/// Distinct tokens of all keyword phrases, in first-seen order.
std::vector<std::string> query_terms(std::span<const Keyword> keywords);

/// Bag-of-words OR query over the keyword tokens. Documents scoring above zero
/// are ranked by BM25 (ties by doc_id). Throws EmptyQuery when there are no
/// query terms.
ResultSet retrieve(std::span<const Keyword> keywords, const InvertedIndex& index,
                   std::size_t limit = 5);

}  // namespace credo
