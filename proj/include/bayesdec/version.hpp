#pragma once

namespace bayesdec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bayesdec
