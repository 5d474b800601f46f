#ifndef SUMMER_VERSION_HPP
#define SUMMER_VERSION_HPP

namespace summer {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
