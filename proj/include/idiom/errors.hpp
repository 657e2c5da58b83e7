#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace idiom {

// Half-open byte range into the original input, plus the 1-based
// line/column of its start.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step budget exhausted while reducing a term. Untyped inputs can loop,
// so the normalizer gives up after a configurable number of contractions.
struct DivergenceError : Error {
  explicit DivergenceError(std::size_t budget)
      : Error("step budget of " + std::to_string(budget) +
              " reductions exceeded; the term likely diverges"),
        budget(budget) {}
  std::size_t budget;
};

struct ArityCapExceeded : Error {
  ArityCapExceeded(std::size_t requested, std::size_t cap)
      : Error("arity " + std::to_string(requested) +
              " exceeds the configured cap of " + std::to_string(cap)),
        requested(requested), cap(cap) {}
  std::size_t requested;
  std::size_t cap;
};

struct InvalidPosition : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& message, SourceSpan span,
             std::vector<std::string> expected = {})
      : Error(message), span(span), expected(std::move(expected)) {}
  SourceSpan span;
  std::vector<std::string> expected;
};

// liftA<n> applied to a number of arguments other than n.
struct ArityMismatch : ParseError {
  using ParseError::ParseError;
};

// Evaluator applied a non-function or projected a non-pair. Signals a
// bug in whatever produced the term; never expected from typed inputs.
struct StuckError : Error {
  using Error::Error;
};

struct UnboundEffectVar : Error {
  explicit UnboundEffectVar(const std::string& name)
      : Error("effect variable '" + name + "' is not bound"), name(name) {}
  std::string name;
};

}  // namespace idiom
