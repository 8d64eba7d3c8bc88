#pragma once

#include <stdexcept>
#include <string>

namespace fwos {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative method failed to converge, or a hard iteration cap was hit.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite or malformed data (bad f/g evaluations, unparsable files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (CLI flags, mismatched checkpoints).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fwos
