#pragma once

namespace nlpc {

inline constexpr const char* kToolName = "nlpc";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlpc
