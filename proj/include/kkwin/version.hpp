#pragma once

namespace kkwin {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace kkwin
