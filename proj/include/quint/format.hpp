#pragma once

#include <cstdio>
#include <string>

namespace quint {
namespace detail {

// Shortest decimal form that round-trips an IEEE double exactly; keeps
// emitted files byte-stable across runs.
inline std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail
}  // namespace quint
