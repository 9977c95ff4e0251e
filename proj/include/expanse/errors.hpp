#pragma once

#include <stdexcept>
#include <string>

namespace expanse {

/// Argument outside the region where a closed form or model is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Model variant for which no closed form exists.
class UnsupportedCase : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Solver or hypothesis parameters that violate an admissibility condition.
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A diagnostic identity was requested for a run it does not apply to.
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace expanse
