#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace credo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent configuration, e.g. an embedding table that does not match
/// its vocabulary, or a malformed config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A value violates a documented precondition (tag outside [0,1], a
/// single-class training set, a weight vector off the simplex, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Duplicate key while building an index or ledger.
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// Unknown document id, entity, or other keyed lookup failure.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Retrieval was asked to run with no query terms.
class EmptyQuery : public Error {
 public:
  EmptyQuery() : Error("empty query: no keywords to retrieve with") {}
};

/// An encoder received a sequence with no tokens.
class EmptySequence : public Error {
 public:
  EmptySequence() : Error("empty token sequence") {}
};

/// A zero-norm encoding was passed to the similarity energy.
class DegenerateEncoding : public Error {
 public:
  DegenerateEncoding() : Error("degenerate encoding: zero vector") {}
};

/// Rank-weighted aggregation was requested over an empty evidence set.
class NoEvidence : public Error {
 public:
  NoEvidence() : Error("no evidence documents retrieved") {}
};

/// A metric is undefined for the given inputs (missing class, constant series).
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace credo
