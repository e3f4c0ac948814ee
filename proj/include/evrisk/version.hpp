#pragma once

namespace evrisk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace evrisk
