#pragma once

#include <string_view>

namespace qport {

inline constexpr std::string_view kToolName = "qport";
inline constexpr std::string_view kVersion = "1.0.0";

} // namespace qport
