#pragma once

namespace frusloop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace frusloop
