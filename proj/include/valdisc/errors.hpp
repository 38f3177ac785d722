#pragma once

#include <stdexcept>
#include <string>

namespace valdisc {

/// Truncation hid information needed to complete an operation: a pivot,
/// a leading coefficient or a valuation came back as "at least q".
class PrecisionExhausted : public std::runtime_error {
 public:
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or out-of-contract input (bad descriptors, reducible polynomials,
/// violated preconditions).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Two independent computation paths disagreed. Always a bug or a corrupt input.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace valdisc
