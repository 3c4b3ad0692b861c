#pragma once

namespace ergolab {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ergolab
