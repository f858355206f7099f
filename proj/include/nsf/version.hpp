#pragma once

namespace nsf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nsf
