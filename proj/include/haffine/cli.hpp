#pragma once

#include <iosfwd>

namespace haffine::cli {

// Full command-line surface; returns the process exit code.
// 0 = success, 1 = verification failure, 2 = usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace haffine::cli
