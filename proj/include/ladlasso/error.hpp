#pragma once

#include <stdexcept>
#include <string>

namespace ladlasso {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed data, mismatched dimensions, out-of-range configuration.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but carries nothing to minimise (e.g. zero total weight).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A bracket could not be grown around a minimum.
class UnboundedDirection : public Error {
 public:
  using Error::Error;
};

// Vertex enumeration would exceed the configured caps.
class ProblemTooLarge : public Error {
 public:
  using Error::Error;
};

// Invariant broken inside a solver; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ladlasso
