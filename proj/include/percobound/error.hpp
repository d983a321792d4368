#pragma once

#include <stdexcept>
#include <string>

namespace percobound {

// Base of every error raised by the library. Callers that only care about
// "bad input" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid structural parameters (generator arguments, malformed graphs, alpha < 0).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A real-valued argument lies outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Enumeration requested beyond the exhaustive-oracle size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (asymmetric matrix, dimension mismatch).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace percobound
