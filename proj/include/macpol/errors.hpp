#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace macpol {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed label or scenario text. `position` is a 0-based byte offset
// into the offending line; `line` is 1-based, or 0 for single-line input.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string reason, std::size_t line = 0);

  std::size_t position() const noexcept { return position_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t position_;
  std::size_t line_;
  std::string reason_;
};

struct Violation {
  std::string field;  // e.g. "mls.lo.compartments"
  std::string rule;   // e.g. "compartment-out-of-range"

  bool operator==(const Violation&) const = default;
};

// Well-formed text whose value breaks a type invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations, std::size_t line = 0);

  const std::vector<Violation>& violations() const noexcept { return violations_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::vector<Violation> violations_;
  std::size_t line_;
};

class PolicyMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class IncompatibleLabels : public Error {
 public:
  using Error::Error;
};

class InfeasibleConfig : public Error {
 public:
  using Error::Error;
};

class WallViolation : public Error {
 public:
  using Error::Error;
};

class UnknownUser : public Error {
 public:
  using Error::Error;
};

class UnknownSession : public Error {
 public:
  using Error::Error;
};

class UnknownPath : public Error {
 public:
  using Error::Error;
};

class AlreadyExists : public Error {
 public:
  using Error::Error;
};

}  // namespace macpol
