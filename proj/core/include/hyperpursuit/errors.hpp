#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace hyperpursuit {

// A precondition on an argument was violated by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The dynamics were evaluated outside their domain (e.g. nonpositive speed).
// When raised from inside a time integration, time() carries the failing time.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what, double time = std::nan(""))
      : std::domain_error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

// A time query fell outside the horizon an object is defined on.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// An evader strategy was queried where it is undefined (x_T == x_P).
class UndefinedStrategyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configuration or artifact failed validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structured-text input could not be parsed. line/column are 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line, int column)
      : ValidationError(what), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// A persisted artifact was produced from a different configuration.
class StaleArtifactError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The Riccati solution blew up before reaching t = 0.
class ConjugatePointError : public std::runtime_error {
 public:
  ConjugatePointError(const std::string& what, double escape_time)
      : std::runtime_error(what), escape_time_(escape_time) {}

  double escape_time() const noexcept { return escape_time_; }

 private:
  double escape_time_;
};

}  // namespace hyperpursuit
