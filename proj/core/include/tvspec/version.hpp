#pragma once

#include <cstdint>

namespace tvspec {

inline constexpr const char* kVersion = "0.3.0";
/// Version of the binary plane container ("TVSPEC01").
inline constexpr std::uint32_t kContainerVersion = 1;

}  // namespace tvspec
