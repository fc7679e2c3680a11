#pragma once

#include <stdexcept>

namespace vnlab {

// Thrown when a computed certificate or structural invariant fails.
// Distinct from std::invalid_argument (bad input data) so callers can map
// the two to different exit codes.
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vnlab
