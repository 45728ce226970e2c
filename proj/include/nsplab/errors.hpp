#pragma once

#include <stdexcept>
#include <string>

namespace nsplab {

/// Raised when inputs violate a documented precondition of a numerical
/// routine (bad dimensions, out-of-range parameters, non-SPD covariance...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised instead of silently truncating a combinatorial enumeration.
class BudgetExceeded : public DomainError {
 public:
  explicit BudgetExceeded(const std::string& what) : DomainError(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace nsplab
