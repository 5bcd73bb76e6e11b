#pragma once

#include <iosfwd>

namespace dyadcov::cli {

/// Entry point behind the `dyadcov` executable. Returns the process exit
/// code: 0 on success, 2 on usage or input errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dyadcov::cli
