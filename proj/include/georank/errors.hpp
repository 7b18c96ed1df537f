#pragma once

#include <stdexcept>
#include <string>

namespace georank {

/// Base class for all engine errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A value violates a type invariant (bad coordinate, open ring, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A name lookup failed (POI, gazetteer region, store file).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A natural-language question contains no resolvable reference geometry.
class UnresolvedReference : public Error {
 public:
  using Error::Error;
};

/// Textual input failed to parse; carries the offending position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// The remote service could not be reached or answered with a transport-level failure.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A response was received but does not match the declared schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A persisted store is missing, corrupt, or of an incompatible version.
class StoreError : public Error {
 public:
  using Error::Error;
};

/// Ranking was asked to select from an empty candidate pool.
class NoAnswerError : public Error {
 public:
  using Error::Error;
};

}  // namespace georank
