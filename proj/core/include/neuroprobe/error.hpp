#pragma once

#include <stdexcept>
#include <string>

namespace neuroprobe {

/// Raised for every recoverable failure surfaced by the library: malformed
/// inputs, violated preconditions, I/O problems, numerical divergence.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace neuroprobe
