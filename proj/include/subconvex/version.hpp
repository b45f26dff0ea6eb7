#pragma once

namespace subconvex {
inline constexpr const char* kToolVersion = "1.0.0";
}
