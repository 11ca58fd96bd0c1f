#pragma once

#include <stdexcept>
#include <string>

namespace kcut {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed tree input: cycles, multiple roots, orphans.
class StructureError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

// Requested size is not reachable by the offspring law (lattice span).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class RetryBudgetError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kcut
