#pragma once

#include <stdexcept>
#include <string>

namespace spintop {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration or schema violation (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input outside a model's domain of definition (CLI exit code 3).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Kinematic chart breakdown: grazing incidence and friends (CLI exit code 3).
class ChartError : public Error {
 public:
  using Error::Error;
};

// Near-degenerate algebraic input (null projector, vanishing factor, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Data that violates a stated precondition (inconsistent rates, off-surface point).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Numerical machinery failure: step policy, projection, step underflow.
class NumericsError : public Error {
 public:
  using Error::Error;
};

}  // namespace spintop
