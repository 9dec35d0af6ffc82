#pragma once

#include <stdexcept>
#include <string>

namespace hyperreg {

// Malformed input: non-crossing edges, missing parts, mismatched shapes.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// An exact computation would exceed its configured work budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hyperreg
