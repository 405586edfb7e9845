#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "credo/bm25.hpp"
#include "credo/ensemble.hpp"
#include "credo/sentiment.hpp"
#include "credo/similarity.hpp"
#include "credo/synthetic.hpp"

namespace credo {

// JSONL readers report malformed lines as ParseError with the line number.

/// {doc_id, title, text, source_url, author|null}
std::vector<KbDocument> parse_kb(std::string_view contents);
std::vector<KbDocument> load_kb(const std::filesystem::path& path);
std::string serialize_kb(std::span<const KbDocument> docs);

/// {id, text, label|null, author|null, source_url, date|null}; the label is a
/// verdict name such as "True" or "Mostly False".
std::vector<ClaimArticle> parse_claims(std::string_view contents);
std::vector<ClaimArticle> load_claims(const std::filesystem::path& path);
std::string serialize_claims(std::span<const ClaimArticle> claims);

/// {text_a, text_b, label}
std::vector<PairExample> parse_pairs(std::string_view contents);
std::vector<PairExample> load_pairs(const std::filesystem::path& path);
std::string serialize_pairs(std::span<const PairExample> pairs);

/// {text, label}
std::vector<SentimentExample> parse_sentiment(std::string_view contents);
std::vector<SentimentExample> load_sentiment(const std::filesystem::path& path);
std::string serialize_sentiment(std::span<const SentimentExample> examples);

/// {domain, score}
std::string serialize_reputation(std::span<const std::pair<std::string, double>> scores);

/// Tab-separated `sentence_a <TAB> sentence_b <TAB> gold`, gold in [0,5].
/// Blank lines and lines starting with '#' are skipped.
std::vector<StsPair> parse_sts(std::string_view contents);
std::vector<StsPair> load_sts(const std::filesystem::path& path);
std::string serialize_sts(std::span<const StsPair> pairs);

/// Gold >= threshold becomes +1, anything else -1.
std::vector<PairExample> binarize_sts(std::span<const StsPair> pairs, double threshold);

}  // namespace credo
