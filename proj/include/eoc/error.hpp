#pragma once

#include <stdexcept>
#include <string>

namespace eoc {

/// Argument outside the mathematical domain of an operation (x < 0, u >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller violated an operation contract (wrong coupling side, empty system, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Iterative solver did not reach its tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Literal overloads keep the passing path allocation free.
inline void require_domain(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}
inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

inline void require_contract(bool ok, const char* what) {
  if (!ok) throw ContractError(what);
}
inline void require_contract(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

}  // namespace detail
}  // namespace eoc
