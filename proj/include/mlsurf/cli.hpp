#pragma once

#include <ostream>

namespace mlsurf::cli {

/// Entry point of `mlsurf`. Returns 0 when every check passes (or the command
/// succeeded), 1 when a verification check failed, 2 for invalid arguments.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlsurf::cli
