#ifndef DICKESIM_VERSION_HPP
#define DICKESIM_VERSION_HPP

namespace dickesim {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
