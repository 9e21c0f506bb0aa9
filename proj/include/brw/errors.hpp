#pragma once

#include <stdexcept>

namespace brw {

// Inputs violate a documented precondition (bad rates, window too small, ...).
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine failed to converge or a fit has no usable data.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation contradicts something the theory guarantees, e.g. more than
// one sign change of the deflated determinant on (0,1). Must abort loudly.
class invariant_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace brw
