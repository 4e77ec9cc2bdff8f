#pragma once

#include <stdexcept>
#include <string>

namespace sparsephase {

/// Thrown when a subset or support enumeration would exceed its configured cap.
struct CapExceededError : std::runtime_error {
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an exact search proves that no admissible solution exists.
struct NoSolutionError : std::runtime_error {
  explicit NoSolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Config-file syntax error with a 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  int line;
};

}  // namespace sparsephase
