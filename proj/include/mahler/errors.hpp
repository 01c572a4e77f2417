#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

// Base for every failure raised by the engine. Callers that only care about
// "did it work" catch this; the CLI maps it to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// A, B zero, d < 2, or some other malformed input tuple.
class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

/// The functional equation has no solution in Q((1/z)).
class NoLaurentSolution : public Error {
 public:
  using Error::Error;
};

class InsufficientPrecision : public Error {
 public:
  using Error::Error;
};

class UncertifiedInput : public Error {
 public:
  using Error::Error;
};

class DegreeCapped : public Error {
 public:
  using Error::Error;
};

/// A(b^{d^t}) * B(b^{d^t}) == 0 for some t.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mahler
