#pragma once
#include <ostream>

namespace fraisse {

// exit codes: 0 ok, 1 domain error, 2 usage error
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraisse
