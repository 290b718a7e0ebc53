#pragma once

namespace cip {
inline constexpr const char* kVersion = "0.1.0";
}
