#pragma once

#include <stdexcept>
#include <string>

namespace cvclone {

/// Raised when an argument lies outside the domain of an operation
/// (negative loss time, bad mode index, malformed partition, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a computation cannot be carried out reliably in double
/// precision (ill-conditioned Schur complement, optimizer stall, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace cvclone
