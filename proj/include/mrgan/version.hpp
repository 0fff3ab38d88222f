#pragma once

namespace mrgan {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mrgan
