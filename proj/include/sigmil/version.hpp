#pragma once

namespace sigmil {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sigmil
