#pragma once

namespace chanent {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chanent
