#pragma once

namespace tvnet {

inline constexpr const char* kVersion = "0.1.0";

} // namespace tvnet
