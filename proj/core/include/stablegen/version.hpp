#pragma once

namespace stablegen {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stablegen
