#pragma once

#include <stdexcept>
#include <string>

namespace cymod {

// Invalid input to a public operation (exit code 2 at the CLI).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// A polynomial or Moebius map whose reduction mod p loses degree or invertibility.
class DegenerateReduction : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class BadPrime : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class DomainError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Characteristic 2 is never modelled (exit code 3 at the CLI).
class UnsupportedCharacteristic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteFixture : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cymod
