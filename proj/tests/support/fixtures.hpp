#pragma once

#include <set>
#include <string>
#include <vector>

#include "credo/random.hpp"
#include "credo/text.hpp"

namespace fixtures {

inline const char* kEinsteinParagraph =
    "In May 1946, Einstein made a rare public appearance outside of Princeton, New Jersey, "
    "when he traveled to the campus of Pennsylvania's Lincoln University, the United States' "
    "first degree-granting black university, to take part in a ceremony conferring upon him "
    "the honorary degree of doctor of laws.";

inline const std::vector<std::string>& content_words() {
  static const std::vector<std::string> words = {
      "river",  "stone",   "quick",    "lamp",    "harbor", "ledger", "north-east", "copper",
      "signal", "meadow",  "1946",     "archive", "falcon", "tensor", "orbit",      "glass",
      "pepper", "kingdom", "well-run", "cobalt"};
  return words;
}

inline const std::vector<std::string>& stop_words() {
  static const std::vector<std::string> words = {"the", "of", "and", "a", "to", "in", "is"};
  return words;
}

inline credo::StopwordSet stopword_set() {
  return credo::StopwordSet(stop_words().begin(), stop_words().end());
}

inline std::set<std::string> stopword_std_set() {
  return std::set<std::string>(stop_words().begin(), stop_words().end());
}

/// Space-separated words with occasional trailing marks; at most
/// `max_tokens` words.
inline std::string random_text(credo::Rng& rng, std::size_t max_tokens) {
  static const std::vector<std::string> marks = {".", ",", ";", "!", "?"};
  std::size_t n = 1 + credo::uniform_index(rng, max_tokens);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pool = credo::bernoulli(rng, 0.3) ? stop_words() : content_words();
    if (!out.empty()) out.push_back(' ');
    out += pool[credo::uniform_index(rng, pool.size())];
    if (credo::bernoulli(rng, 0.12)) out += marks[credo::uniform_index(rng, marks.size())];
  }
  return out;
}

}  // namespace fixtures
