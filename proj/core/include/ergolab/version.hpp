#ifndef ERGOLAB_VERSION_HPP
#define ERGOLAB_VERSION_HPP

namespace ergolab {

inline constexpr const char* library_version = "0.1.0";

}  // namespace ergolab

#endif  // ERGOLAB_VERSION_HPP
