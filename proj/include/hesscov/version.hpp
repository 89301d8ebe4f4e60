#pragma once

namespace hesscov {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hesscov
