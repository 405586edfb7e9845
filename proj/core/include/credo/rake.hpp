#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "credo/text.hpp"

namespace credo {

/// Maximal run of content words between delimiters (stopwords, punctuation,
/// sentence boundaries).
struct CandidatePhrase {
  std::vector<Token> words;
  std::size_t start = 0;  ///< position of the first word
  std::size_t end = 0;    ///< one past the position of the last word

  std::string phrase() const;
};

struct Keyword {
  std::string phrase;
  double kscore = 0.0;
  std::size_t first_position = 0;  ///< span start of the earliest occurrence

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

std::vector<CandidatePhrase> extract_candidates(std::string_view text,
                                                const StopwordSet& stopwords);

/// deg(w)/freq(w) per content word, where freq counts occurrences across all
/// candidates and deg sums the lengths of the candidates containing each
/// occurrence.
std::map<std::string, double> score_words(std::span<const CandidatePhrase> candidates);

/// Keywords ordered by kscore descending, earlier first occurrence winning ties.
/// Duplicate phrases are merged. Returns at most `top_k` entries.
std::vector<Keyword> extract_keywords(std::string_view text, const StopwordSet& stopwords,
                                      std::size_t top_k = 10);

}  // namespace credo
