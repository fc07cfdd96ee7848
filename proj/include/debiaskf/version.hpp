#pragma once

namespace debiaskf {
inline constexpr const char* kVersion = "0.1.0";
}
