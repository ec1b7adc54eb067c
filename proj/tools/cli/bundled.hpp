#pragma once

#include <string_view>

namespace sproc::cli {

/// Contents of data/instances/<name>, compiled in at build time. Throws
/// InputError for an unknown name.
std::string_view bundled(std::string_view name);

}  // namespace sproc::cli
