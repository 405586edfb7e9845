#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "credo/random.hpp"

namespace credo {

struct Token {
  std::string surface;       ///< lowercased, non-empty, no whitespace
  std::size_t position = 0;  ///< 0-based index in the document

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::string text;
  std::size_t index = 0;   ///< 0-based position in the document
  std::size_t offset = 0;  ///< byte offset of `text` in the source
  std::vector<Token> tokens;
};

/// Token plus markers for punctuation that was stripped from either side.
/// Keyword extraction treats those markers as phrase boundaries.
struct ScannedToken {
  Token token;
  bool break_before = false;
  bool break_after = false;
};

/// Lowercases, splits on Unicode whitespace, strips leading/trailing
/// punctuation (and a possessive 's) from each piece, keeps internal hyphens,
/// and drops empty pieces.
std::vector<Token> tokenize(std::string_view text);

std::vector<ScannedToken> scan_tokens(std::string_view text);

/// Splits after '.', '!' or '?' when followed by whitespace or end of text.
/// Token positions inside each sentence are document-level.
std::vector<Sentence> split_sentences(std::string_view text);

// ---------------------------------------------------------------------------
// Stopwords

using StopwordSet = std::set<std::string, std::less<>>;

/// One lowercase word per line; blank lines and lines starting with '#' are
/// ignored.
StopwordSet parse_stopwords(std::string_view contents);
StopwordSet load_stopwords(const std::filesystem::path& path);

/// The list shipped in core/data/stopwords_en.txt.
const StopwordSet& default_stopwords();
std::string_view default_stopword_file_contents();

// ---------------------------------------------------------------------------
// Vocabulary and embeddings

class Vocabulary {
 public:
  using Id = std::int32_t;
  static constexpr Id kPadding = 0;
  static constexpr Id kUnknown = 1;

  Vocabulary();

  /// Rebuilds a vocabulary from its id-ordered token list (as stored in a
  /// checkpoint). The first two entries must be the special tokens.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  /// Adds `surface` if absent; returns its id either way.
  Id add(std::string_view surface);

  /// Returns kUnknown for out-of-vocabulary tokens.
  Id id(std::string_view surface) const;
  bool contains(std::string_view surface) const;
  const std::string& token(Id id) const;

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Id> ids_;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EmbeddingTable {
  RowMatrix weights;  ///< (vocab size) x (embed dim)

  std::size_t rows() const noexcept { return static_cast<std::size_t>(weights.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(weights.cols()); }

  /// Entries uniform in [-scale, scale].
  static EmbeddingTable random(std::size_t vocab_size, std::size_t dim, Rng& rng,
                               double scale = 0.1);
};

/// Row for the token's id; the UNKNOWN row for out-of-vocabulary tokens.
/// Throws ConfigError if the table does not have one row per vocabulary entry.
Eigen::VectorXd embed_lookup(const Token& token, const Vocabulary& vocab,
                             const EmbeddingTable& table);

/// Maps tokens to ids, truncating to at most `max_tokens` entries.
std::vector<Vocabulary::Id> to_ids(std::span<const Token> tokens, const Vocabulary& vocab,
                                   std::size_t max_tokens);

}  // namespace credo
