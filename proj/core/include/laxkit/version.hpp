#pragma once

namespace laxkit {
inline constexpr const char* kVersion = "0.1.0";
}
