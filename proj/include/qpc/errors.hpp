#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qpc {

// Index, particle or count outside its valid range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Operation not allowed in the current quantum state, e.g. re-measuring a
// consumed particle.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Request beyond a simulator capability bound.
class CapabilityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Caller broke a precondition between related arguments (misaligned lists,
// mismatched pairs, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid scenario or configuration document. `field` names the offending key
// using dotted paths, e.g. "adversary.params.links".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qpc
