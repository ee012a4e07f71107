#pragma once

namespace qgc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qgc
