#pragma once

namespace lapdiag {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace lapdiag
