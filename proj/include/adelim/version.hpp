#pragma once

namespace adelim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace adelim
