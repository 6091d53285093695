#pragma once

namespace evgap {

inline constexpr const char* kToolName = "evgap";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace evgap
