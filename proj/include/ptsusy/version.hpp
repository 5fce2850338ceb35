#pragma once

namespace ptsusy {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ptsusy
