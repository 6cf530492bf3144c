#ifndef BLINDSSR_VERSION_HPP
#define BLINDSSR_VERSION_HPP

namespace blindssr {

const char* version_string();

} // namespace blindssr

#endif
