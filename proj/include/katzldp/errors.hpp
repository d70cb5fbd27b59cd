#pragma once

#include <stdexcept>
#include <string>

namespace katzldp {

/// Malformed input file (edge list, config). Carries the 1-based line number
/// when one is known, 0 otherwise.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, long long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  long long line() const { return line_; }

 private:
  long long line_;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative method ran out of iterations. Carries the last estimate so
/// callers can still inspect how far it got.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, double last_estimate)
      : std::runtime_error(msg), last_estimate_(last_estimate) {}
  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_;
};

/// Raised when an experiment cannot produce statistics (e.g. every trial
/// overflowed to non-finite values).
class DivergedError : public std::runtime_error {
 public:
  explicit DivergedError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace katzldp
