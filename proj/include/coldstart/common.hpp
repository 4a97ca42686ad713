#pragma once

#include <stdexcept>
#include <string>

namespace coldstart {

// Bad input data or configuration (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& file, long line, const std::string& what)
      : ValidationError(file + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  long line_number;
};

// A caller broke an API contract; programming error, not bad data.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// SGD hit a non-finite loss.
class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(int at_epoch, const std::string& what)
      : std::runtime_error(what + " (epoch " + std::to_string(at_epoch) + ")"),
        epoch(at_epoch) {}
  int epoch;
};

}  // namespace coldstart
