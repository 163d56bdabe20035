#include "sgjms/version.hpp"

namespace sgjms {

std::string_view version() { return SGJMS_VERSION_STRING; }

}  // namespace sgjms
