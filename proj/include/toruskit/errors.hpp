#pragma once

#include <stdexcept>
#include <string>

namespace toruskit {

// Input that does not describe a well-formed object (wrong lengths, bad schema).
class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Well-formed input outside the domain of an operation.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Request exceeds what the implementation supports (dimension caps etc).
class CapabilityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A search ran out of its time budget before reaching a verdict.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace toruskit
