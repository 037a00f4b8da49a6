#pragma once

namespace qfel {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace qfel
