#pragma once

#include <stdexcept>
#include <string>

namespace hetnet {

// Input outside the mathematical domain of an operation (a pole, an exponent
// outside its admissible interval, an index out of range).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine failed to reach its tolerance or produced a value that
// cannot be trusted. The message carries the diagnostics.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scenario or model violates one or more of its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hetnet

namespace hetnet {

// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetnet
