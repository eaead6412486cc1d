#pragma once

#include <cstddef>

namespace arbor {

// Resource limits for the enumeration routines.  Defaults can be overridden
// process-wide through the environment (CAP_GROUP_ORDER, CAP_BALL_SIZE) or
// per call by passing an explicit Caps value.
struct Caps {
  std::size_t group_order = 1'000'000;  // max elements any closure may enumerate
  std::size_t ball_size = 1'000'000;    // max ball-group order / ball vertex count
};

// Process-wide caps, initialised once from the environment.  Mutable so the
// CLI can apply flag overrides before running a command.
Caps& global_caps();

}  // namespace arbor
