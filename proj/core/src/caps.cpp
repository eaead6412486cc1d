#include "arbor/caps.hpp"

#include <cstdlib>
#include <string>

namespace arbor {

namespace {

std::size_t env_override(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    unsigned long long value = std::stoull(raw);
    if (value == 0) return fallback;
    return static_cast<std::size_t>(value);
  } catch (...) {
    return fallback;
  }
}

Caps initial_caps() {
  Caps caps;
  caps.group_order = env_override("CAP_GROUP_ORDER", caps.group_order);
  caps.ball_size = env_override("CAP_BALL_SIZE", caps.ball_size);
  return caps;
}

}  // namespace

Caps& global_caps() {
  static Caps caps = initial_caps();
  return caps;
}

}  // namespace arbor
