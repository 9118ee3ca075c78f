#pragma once

namespace wsdt {

inline constexpr const char* kToolName = "wsdt";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace wsdt
