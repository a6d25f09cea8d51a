#pragma once

namespace relic {
inline constexpr const char* kVersion = "0.1.0";
}
