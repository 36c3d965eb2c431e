#pragma once

#include <stdexcept>
#include <string>

namespace arcminer {

// Base for all data-dependent failures raised by the library. Precondition
// violations on arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input file content; carries the 1-based line when known.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace arcminer
