#pragma once

namespace kintop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kintop
