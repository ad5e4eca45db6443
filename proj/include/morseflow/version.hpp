#pragma once

namespace morseflow {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace morseflow
