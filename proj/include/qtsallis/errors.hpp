#pragma once

#include <stdexcept>
#include <string>

namespace qtsallis {

// Malformed input: bad distributions, out-of-range parameters, mismatched shapes.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A formula hit a genuinely degenerate point (e.g. a vanishing denominator).
class SingularityError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A dimension or multiplicity exceeds what the representation can hold.
class CapacityError : public std::length_error {
public:
  using std::length_error::length_error;
};

// Eigensolver failure or a failed internal consistency check.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace qtsallis
