#pragma once

namespace wfr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wfr
