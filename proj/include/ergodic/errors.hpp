#pragma once

#include <stdexcept>

namespace ergodic {

/// Raised when an operation needs a capability the argument does not provide,
/// e.g. an explicit matrix from a generator-only proposal kernel.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ergodic
