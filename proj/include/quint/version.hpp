#pragma once

namespace quint {

inline constexpr const char* version = "0.1.0";

}  // namespace quint
