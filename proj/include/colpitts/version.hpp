#pragma once

namespace colpitts {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace colpitts
