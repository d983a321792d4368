#pragma once

namespace percobound {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace percobound
