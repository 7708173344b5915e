#pragma once

#include <stdexcept>
#include <string>

namespace genfric {

/// Input violates a documented invariant (bad frequencies, wrong dimension, ...).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not deliver its contract (solver stall, integration abort).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace genfric
