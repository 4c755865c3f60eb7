#pragma once

namespace tverify {

inline constexpr const char* kVersion = "0.1.0";

} // namespace tverify
