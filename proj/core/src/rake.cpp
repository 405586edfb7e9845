#include "credo/rake.hpp"

#include <algorithm>
#include <unordered_map>

#include "credo/error.hpp"

namespace credo {

std::string CandidatePhrase::phrase() const {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w.surface;
  }
  return out;
}

std::vector<CandidatePhrase> extract_candidates(std::string_view text,
                                                const StopwordSet& stopwords) {
  std::vector<CandidatePhrase> out;
  std::size_t doc_position = 0;
  for (const auto& sentence : split_sentences(text)) {
    CandidatePhrase current;
    auto flush = [&] {
      if (!current.words.empty()) {
        current.start = current.words.front().position;
        current.end = current.words.back().position + 1;
        out.push_back(std::move(current));
      }
      current = CandidatePhrase{};
    };
    for (auto& scanned : scan_tokens(sentence.text)) {
      scanned.token.position = doc_position++;
      if (scanned.break_before) flush();
      if (stopwords.contains(scanned.token.surface)) {
        flush();
        continue;
      }
      current.words.push_back(std::move(scanned.token));
      if (scanned.break_after) flush();
    }
    flush();
  }
  return out;
}

std::map<std::string, double> score_words(std::span<const CandidatePhrase> candidates) {
  std::map<std::string, std::pair<double, double>> deg_freq;
  for (const auto& c : candidates) {
    double len = static_cast<double>(c.words.size());
    for (const auto& w : c.words) {
      auto& [deg, freq] = deg_freq[w.surface];
      deg += len;
      freq += 1.0;
    }
  }
  std::map<std::string, double> scores;
  for (const auto& [word, df] : deg_freq) scores.emplace(word, df.first / df.second);
  return scores;
}

std::vector<Keyword> extract_keywords(std::string_view text, const StopwordSet& stopwords,
                                      std::size_t top_k) {
  if (top_k == 0) throw ValidationError("top_k must be at least 1");
  auto candidates = extract_candidates(text, stopwords);
  auto word_scores = score_words(candidates);

  std::vector<Keyword> keywords;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& c : candidates) {
    std::string phrase = c.phrase();
    if (seen.contains(phrase)) continue;
    double kscore = 0.0;
    for (const auto& w : c.words) kscore += word_scores.at(w.surface);
    seen.emplace(phrase, keywords.size());
    keywords.push_back({std::move(phrase), kscore, c.start});
  }
  std::stable_sort(keywords.begin(), keywords.end(), [](const Keyword& a, const Keyword& b) {
    if (a.kscore != b.kscore) return a.kscore > b.kscore;
    return a.first_position < b.first_position;
  });
  if (keywords.size() > top_k) keywords.resize(top_k);
  return keywords;
}

}  // namespace credo
