#pragma once

namespace caslayer {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace caslayer
