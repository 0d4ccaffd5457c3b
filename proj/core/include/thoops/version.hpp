#pragma once

namespace thoops {

/// Library version, "major.minor.patch".
const char* version();

}  // namespace thoops
