#pragma once

namespace slitsim {

inline constexpr const char* version = "0.1.0";

}  // namespace slitsim
