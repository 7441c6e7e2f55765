#pragma once

#include <stdexcept>
#include <string>

namespace dqe {

// Malformed or inconsistent input (bad parameters, schema violations, no matching table row).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerically impossible request or a state the model cannot represent.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dqe
