#pragma once

#include <stdexcept>
#include <string>

namespace gme {

// Contract violations on inputs (ranges, dimensions, shapes).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computed quantity that should be real or bounded came out otherwise.
class NumericInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix or tensor fails the density-matrix invariants.
class NotAState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, int restart_index)
      : std::runtime_error(what), restart_index_(restart_index) {}
  int restart_index() const noexcept { return restart_index_; }

 private:
  int restart_index_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, std::string field)
      : std::runtime_error(what), line_(line), field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gme
