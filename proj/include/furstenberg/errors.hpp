#pragma once

#include <stdexcept>
#include <string>

namespace furstenberg {

// Runtime numerical failure: eigensolver non-convergence, overflow between
// reorthonormalizations, exponential out of double range.  Distinct from
// std::invalid_argument, which signals a violated precondition.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace furstenberg
