#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace credo {

/// Editorial verdicts, in increasing credibility.
enum class Verdict { False, MostlyFalse, MostlyTrue, True };

enum class LabelMode { Binary, MultiClass };

std::string_view to_string(Verdict v);
/// Accepts "True", "Mostly True", "mostly_false", "FALSE", ... Throws ValidationError.
Verdict parse_verdict(std::string_view text);
/// True and Mostly True count as credible.
inline bool is_credible(Verdict v) { return v == Verdict::True || v == Verdict::MostlyTrue; }

/// Tag value t in [0,1] fed into the trust recurrences.
class TagValue {
 public:
  /// Throws ValidationError when t is outside [0,1] or not finite.
  explicit TagValue(double t);

  /// Graded mode: 0, 0.25, 0.75, 1. Binary mode: 0 or 1.
  static TagValue from_verdict(Verdict v, LabelMode mode);

  double value() const noexcept { return t_; }

 private:
  double t_;
};

enum class EntityKind { Author, Website };

struct LedgerEntry {
  std::string entity_id;
  double score = 0.5;
  std::uint64_t count = 0;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Initial website reputations; stands in for an external reputation service.
class ReputationProvider {
 public:
  static constexpr double kDefaultScore = 0.5;

  ReputationProvider() = default;

  /// Throws ValidationError for scores outside [0,1].
  void set(std::string_view domain, double score);
  double lookup(std::string_view domain) const;
  std::size_t size() const noexcept { return scores_.size(); }

  /// JSONL of {"domain": ..., "score": ...}. Throws ParseError with line number.
  static ReputationProvider parse(std::string_view contents);
  static ReputationProvider load(const std::filesystem::path& path);

 private:
  std::map<std::string, double, std::less<>> scores_;
};

/// Host of a URL, lowercased, without scheme, port, path or a leading "www.".
std::string normalize_domain(std::string_view url);
/// Lowercased trimmed author name; "anonymous" for missing or blank authors.
std::string normalize_author(const std::optional<std::string>& author);

/// Authors always start at 0.5; websites start at the provider's score.
LedgerEntry init_entry(EntityKind kind, std::string_view entity_id,
                       const ReputationProvider& provider);

/// Multiplier applied by one labelled instance: 1 + ln(1 - t) for t <= 0.5,
/// 1 + ln(1 + t) otherwise.
double update_factor(TagValue tag);

/// score <- clamp(factor * score, 0, 1); count <- count + 1.
LedgerEntry update(const LedgerEntry& entry, TagValue tag);

/// Per-entity trust state for one entity kind. Updates must be applied in
/// dataset order by a single writer.
class TrustLedger {
 public:
  explicit TrustLedger(EntityKind kind,
                       std::shared_ptr<const ReputationProvider> provider = nullptr);

  EntityKind kind() const noexcept { return kind_; }

  /// Applies one labelled instance to `entity_id`, creating the entry if needed.
  const LedgerEntry& observe(std::string_view entity_id, TagValue tag);

  /// Current entry, or the initial entry for unseen entities (not stored).
  LedgerEntry lookup(std::string_view entity_id) const;
  double score(std::string_view entity_id) const { return lookup(entity_id).score; }

  void insert(LedgerEntry entry);
  void clear() { entries_.clear(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::string, LedgerEntry, std::less<>>& entries() const noexcept { return entries_; }

  /// JSONL of {"entity_id", "score", "count"}, sorted by entity_id, with
  /// round-trip precision for scores.
  std::string serialize() const;
  void persist(const std::filesystem::path& path) const;

  /// Throws ParseError (with line number) on malformed input.
  static TrustLedger parse(std::string_view contents, EntityKind kind,
                           std::shared_ptr<const ReputationProvider> provider = nullptr);
  static TrustLedger load(const std::filesystem::path& path, EntityKind kind,
                          std::shared_ptr<const ReputationProvider> provider = nullptr);

  friend bool operator==(const TrustLedger& a, const TrustLedger& b) {
    return a.kind_ == b.kind_ && a.entries_ == b.entries_;
  }

 private:
  EntityKind kind_;
  std::shared_ptr<const ReputationProvider> provider_;
  std::map<std::string, LedgerEntry, std::less<>> entries_;
};

}  // namespace credo
