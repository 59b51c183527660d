#pragma once

namespace qmlab {
inline constexpr const char* version = "0.1.0";
}
