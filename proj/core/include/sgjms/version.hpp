#ifndef SGJMS_VERSION_HPP_
#define SGJMS_VERSION_HPP_

#include <string_view>

namespace sgjms {

/// Library version, "major.minor.patch".
std::string_view version();

}  // namespace sgjms

#endif  // SGJMS_VERSION_HPP_
