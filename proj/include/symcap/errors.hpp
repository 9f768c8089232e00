#pragma once

#include <stdexcept>

namespace symcap {

// Input violates an operation's precondition: non-PD matrix, singular map,
// odd dimension, body that is not symmetric where symmetry is required.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine did not reach its tolerance or iteration budget.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace symcap

namespace symcap {

// Malformed body spec or experiment config (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace symcap
