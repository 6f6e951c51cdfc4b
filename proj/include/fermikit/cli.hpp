#pragma once

#include <ostream>

namespace fermikit {

// Exit codes: 0 success, 2 usage or domain error, 3 numerical failure
// (non-convergence, identity gap above tolerance, failed self-test criterion).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fermikit
