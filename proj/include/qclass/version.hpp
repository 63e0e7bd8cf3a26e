#pragma once

namespace qclass {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qclass
