#pragma once

#define HULLS_VERSION_MAJOR 0
#define HULLS_VERSION_MINOR 1
#define HULLS_VERSION_PATCH 0
#define HULLS_VERSION_STRING "0.1.0"

namespace hulls {
inline const char* version() { return HULLS_VERSION_STRING; }
}  // namespace hulls
