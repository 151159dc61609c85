#pragma once

namespace ergomean {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ergomean
