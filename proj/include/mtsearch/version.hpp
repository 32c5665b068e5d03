#pragma once

namespace mtsearch {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace mtsearch
