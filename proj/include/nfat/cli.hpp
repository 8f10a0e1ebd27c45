#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nfat::cli {

// Runs one CLI invocation. args excludes the program name.
// Exit status: 0 success, 1 domain error (reported on err), 2 usage error.
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace nfat::cli
