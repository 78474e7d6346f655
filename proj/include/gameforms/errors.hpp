#pragma once

#include <stdexcept>
#include <string>

namespace gameforms {

// Input text violates one of the documented grammars. `line` is 1-based.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_) + ": " + message),
        line(line_) {}
};

// An enumeration or sweep exceeded its configured budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gameforms
