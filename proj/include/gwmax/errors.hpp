#pragma once

#include <stdexcept>
#include <string>

namespace gwmax {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Invalid law, measure or run configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bracket failure, non-convergent estimate, or an internal consistency check that did not hold.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gwmax
