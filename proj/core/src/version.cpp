#include "blindssr/version.hpp"

namespace blindssr {

const char* version_string() {
#ifdef BLINDSSR_VERSION_STRING
    return BLINDSSR_VERSION_STRING;
#else
    return "0.0.0-dev";
#endif
}

} // namespace blindssr
