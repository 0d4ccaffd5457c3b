#include "thoops/version.hpp"

namespace thoops {

const char* version() { return THOOPS_VERSION_STRING; }

}  // namespace thoops
