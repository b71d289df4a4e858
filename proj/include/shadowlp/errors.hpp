#pragma once

#include <stdexcept>
#include <string>

namespace shadowlp {

/** Base class for every error raised by the library. */
class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Malformed LP text; carries the 1-based line number. */
class ParseError : public LpError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : LpError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimensionError : public LpError {
 public:
  using LpError::LpError;
};

class SingularMatrixError : public LpError {
 public:
  using LpError::LpError;
};

/** A documented precondition of an operation does not hold (caller bug). */
class PreconditionError : public LpError {
 public:
  using LpError::LpError;
};

/** Brute-force enumeration would exceed its combinatorial guard. */
class GuardExceededError : public LpError {
 public:
  using LpError::LpError;
};

/** A pivot met an edge without a blocking row (the polytope was not boxed). */
class UnboundedEdgeError : public LpError {
 public:
  using LpError::LpError;
};

/** The phi doubling loop ran past its iteration guard. */
class ScheduleExhaustedError : public LpError {
 public:
  using LpError::LpError;
};

}  // namespace shadowlp
