#pragma once

#include <stdexcept>
#include <string>

namespace contractio {

/// A value outside the domain of an operation (φ at 0 when 0 is excluded,
/// empty compact sets, division by an exact zero, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A pair whose condition argument is 0 while φ is undefined at 0. Not a
/// violation; callers count these separately.
class DegeneratePair : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace contractio
