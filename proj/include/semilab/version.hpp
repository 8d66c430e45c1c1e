#pragma once

namespace semilab {

inline constexpr const char* tool_version = "0.1.0";

}
