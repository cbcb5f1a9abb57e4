#pragma once

namespace modsum {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace modsum
