#pragma once

#include <stdexcept>
#include <string>

namespace quint {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A value violates a domain precondition (negative magnitude, zero axis, ...).
class ValueError : public Error {
public:
  using Error::Error;
};

// A single-scatterer cross section is zero or negative; the interference
// cosines are undefined there.
class DegenerateScatterer : public Error {
public:
  using Error::Error;
};

// The requested cosine triple admits no Gram matrix of unit vectors
// (an eigenvalue is significantly negative, i.e. F > 1), or measured
// data cannot be matched by any realizable triple within its error bars.
class NotRealizable : public Error {
public:
  using Error::Error;
};

// sigma_a exceeds the unitarity bound pi/k^2.
class UnphysicalAbsorption : public Error {
public:
  using Error::Error;
};

// A composed slab operator has underflowed to zero (total absorption);
// its direction carries no information.
class DegenerateOperator : public Error {
public:
  using Error::Error;
};

// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, long line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

// Structurally valid input that does not satisfy the schema
// (missing/duplicate/unknown id or key).
class SchemaError : public Error {
public:
  using Error::Error;
};

// File could not be opened or written.
class IoError : public Error {
public:
  using Error::Error;
};

// An iteration failed to converge or produced non-finite intermediates.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace quint
