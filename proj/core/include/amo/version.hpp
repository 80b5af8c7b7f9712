#pragma once

namespace amo {

inline constexpr const char* kVersion = "0.1.0";

}
