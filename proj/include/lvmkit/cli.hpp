#pragma once

#include <ostream>

namespace lvmkit {

/// Command-line entry point. Exit codes: 0 success, 1 mathematical failure, 2 usage or parse error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace lvmkit
