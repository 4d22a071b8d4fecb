#pragma once

#include <stdexcept>
#include <string>

namespace nhsense {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: violated precondition or invariant.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Parameters whose exponential factors would not fit in a double.
class OverflowError : public Error {
 public:
  using Error::Error;
};

class StepSizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace nhsense
