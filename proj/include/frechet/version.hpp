#pragma once

namespace frechet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace frechet
