#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace statsub {

// Base class for everything the engine throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- expression parsing ---

struct SyntaxError : Error {
  std::size_t position;
  SyntaxError(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct UnknownIdentifier : Error {
  std::string name;
  std::size_t position;
  UnknownIdentifier(const std::string& ident, std::size_t pos)
      : Error("unknown identifier '" + ident + "' (at position " + std::to_string(pos) + ")"),
        name(ident),
        position(pos) {}
};

struct ArityError : Error {
  ArityError(const std::string& fn, std::size_t expected, std::size_t got)
      : Error("function '" + fn + "' expects " + std::to_string(expected) +
              " argument(s), got " + std::to_string(got)) {}
};

// --- evaluation ---

struct DomainError : Error {
  using Error::Error;
};

// --- linear algebra and geometry ---

struct DegenerateMetric : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  using Error::Error;
};

// --- soliton analyses ---

struct NotVertical : Error {
  using Error::Error;
};

struct NotVerticalGradient : Error {
  using Error::Error;
};

struct SingularDenominator : Error {
  using Error::Error;
};

// --- manifests and the command line ---

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct UnknownExample : Error {
  explicit UnknownExample(const std::string& name) : Error("unknown example '" + name + "'") {}
};

}  // namespace statsub
