#pragma once

#include <string_view>

namespace tpslab {

inline constexpr std::string_view kVersion = "tpslab 0.1.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace tpslab
