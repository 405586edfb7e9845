#include "credo/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "credo/error.hpp"

namespace credo {
namespace {

void add_document(std::map<std::string, std::vector<Posting>, std::less<>>& postings,
                  std::size_t ordinal, const std::vector<std::string>& terms) {
  std::map<std::string_view, std::uint32_t> tf;
  for (const auto& t : terms) ++tf[t];
  for (const auto& [term, count] : tf) {
    auto it = postings.find(term);
    if (it == postings.end()) it = postings.emplace(std::string(term), std::vector<Posting>{}).first;
    it->second.push_back({ordinal, count});
  }
}

}  // namespace

void InvertedIndex::finalize() {
  std::size_t total = 0;
  for (auto len : lengths_) total += len;
  avg_length_ = lengths_.empty() ? 0.0 : static_cast<double>(total) / lengths_.size();

  const double n = static_cast<double>(lengths_.size());
  idf_.clear();
  double positive_sum = 0.0;
  std::size_t positive_count = 0;
  for (const auto& [term, plist] : postings_) {
    double df = static_cast<double>(plist.size());
    double raw = std::log((n - df + 0.5) / (df + 0.5));
    idf_.emplace(term, raw);
    if (raw > 0.0) {
      positive_sum += raw;
      ++positive_count;
    }
  }
  double mean_positive = positive_count > 0 ? positive_sum / positive_count : 1.0;
  double floor = params_.epsilon * mean_positive;
  for (auto& [term, value] : idf_) {
    if (value < 0.0) value = floor;
  }
}

InvertedIndex InvertedIndex::from_token_lists(const std::vector<std::vector<std::string>>& docs,
                                              Bm25Params params) {
  InvertedIndex index;
  index.params_ = params;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    add_document(index.postings_, i, docs[i]);
    index.lengths_.push_back(docs[i].size());
  }
  index.finalize();
  return index;
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

std::uint32_t InvertedIndex::term_frequency(std::string_view term, std::size_t ordinal) const {
  auto plist = postings(term);
  auto it = std::lower_bound(plist.begin(), plist.end(), ordinal,
                             [](const Posting& p, std::size_t d) { return p.doc < d; });
  return (it != plist.end() && it->doc == ordinal) ? it->tf : 0;
}

double InvertedIndex::idf(std::string_view term) const {
  auto it = idf_.find(term);
  return it == idf_.end() ? 0.0 : it->second;
}

double InvertedIndex::score(std::span<const std::string> query, std::size_t ordinal) const {
  if (ordinal >= lengths_.size()) throw LookupError("document ordinal out of range");
  const double k1 = params_.k1;
  const double b = params_.b;
  const double norm = avg_length_ > 0.0 ? static_cast<double>(lengths_[ordinal]) / avg_length_ : 0.0;
  double total = 0.0;
  for (const auto& term : query) {
    double tf = term_frequency(term, ordinal);
    if (tf == 0.0) continue;
    total += idf(term) * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
  }
  return total;
}

std::vector<double> InvertedIndex::score_all(std::span<const std::string> query) const {
  std::vector<double> scores(lengths_.size(), 0.0);
  const double k1 = params_.k1;
  const double b = params_.b;
  for (const auto& term : query) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    double term_idf = idf(term);
    for (const auto& p : it->second) {
      double tf = p.tf;
      double norm = static_cast<double>(lengths_[p.doc]) / avg_length_;
      scores[p.doc] += term_idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
    }
  }
  return scores;
}

std::optional<std::size_t> InvertedIndex::ordinal(std::string_view doc_id) const {
  auto it = std::lower_bound(docs_.begin(), docs_.end(), doc_id,
                             [](const KbDocument& d, std::string_view id) { return d.doc_id < id; });
  if (it == docs_.end() || it->doc_id != doc_id) return std::nullopt;
  return static_cast<std::size_t>(it - docs_.begin());
}

std::vector<std::string> index_terms(const KbDocument& doc) {
  std::vector<std::string> terms;
  for (auto& t : tokenize(doc.title)) terms.push_back(std::move(t.surface));
  for (auto& t : tokenize(doc.text)) terms.push_back(std::move(t.surface));
  return terms;
}

InvertedIndex build_index(std::vector<KbDocument> corpus, Bm25Params params) {
  std::stable_sort(corpus.begin(), corpus.end(),
                   [](const KbDocument& a, const KbDocument& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (i > 0 && corpus[i].doc_id == corpus[i - 1].doc_id) {
      throw IngestionError("duplicate doc_id: " + corpus[i].doc_id);
    }
    if (corpus[i].text.empty()) {
      throw ValidationError("document has empty text: " + corpus[i].doc_id);
    }
  }
  InvertedIndex index;
  index.params_ = params;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto terms = index_terms(corpus[i]);
    add_document(index.postings_, i, terms);
    index.lengths_.push_back(terms.size());
  }
  index.docs_ = std::move(corpus);
  index.finalize();
  return index;
}

double bm25_score(std::span<const std::string> query_terms, std::string_view doc_id,
                  const InvertedIndex& index) {
  auto ord = index.ordinal(doc_id);
  if (!ord) throw LookupError("unknown doc_id: " + std::string(doc_id));
  return index.score(query_terms, *ord);
}

std::vector<std::string> query_terms(std::span<const Keyword> keywords) {
  std::vector<std::string> terms;
  std::set<std::string, std::less<>> seen;
  for (const auto& kw : keywords) {
    for (auto& tok : tokenize(kw.phrase)) {
      if (seen.insert(tok.surface).second) terms.push_back(std::move(tok.surface));
    }
  }
  return terms;
}

ResultSet retrieve(std::span<const Keyword> keywords, const InvertedIndex& index,
                   std::size_t limit) {
  if (limit == 0) throw ValidationError("retrieval limit must be at least 1");
  auto terms = query_terms(keywords);
  if (terms.empty()) throw EmptyQuery();

  auto scores = index.score_all(terms);
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > 0.0) hits.push_back(i);
  }
  // ordinals follow doc_id order, so the ordinal breaks ties by doc_id
  std::sort(hits.begin(), hits.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  if (hits.size() > limit) hits.resize(limit);

  ResultSet result;
  for (std::size_t r = 0; r < hits.size(); ++r) {
    result.docs.push_back({index.document(hits[r]), r + 1, scores[hits[r]]});
  }
  return result;
}

}  // namespace credo
