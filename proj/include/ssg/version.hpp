#pragma once

namespace ssg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ssg
