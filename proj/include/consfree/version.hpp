#pragma once

namespace consfree {
inline constexpr const char* version = "0.1.0";
}
