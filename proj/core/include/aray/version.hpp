#pragma once

namespace aray {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace aray
