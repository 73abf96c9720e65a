#pragma once

namespace sis {
inline constexpr const char* version = "0.1.0";
}
