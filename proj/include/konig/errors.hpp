#pragma once

#include <stdexcept>
#include <string>

namespace konig {

/// A caller broke a documented precondition (self-loop, duplicate pair,
/// non-maximum matching handed to a routine that requires one, ...).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// Invalid configuration: bad vertex count, guard exceeded, phi out of range.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A query window or index lies outside the recorded run.
class RangeError : public std::out_of_range {
 public:
  explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

/// Every pair of K_n has already been offered.
class EndOfProcess : public std::runtime_error {
 public:
  explicit EndOfProcess(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace konig
