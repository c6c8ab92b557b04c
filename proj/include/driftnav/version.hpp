#pragma once

namespace driftnav {
inline constexpr const char* kVersion = "0.1.0";
}  // namespace driftnav
