#pragma once

namespace nsdiag {

inline constexpr const char* kVersion = "0.1.0";

} // namespace nsdiag
