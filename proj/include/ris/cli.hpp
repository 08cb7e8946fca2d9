#pragma once

#include <ostream>

namespace ris {

/// Entry point of the ris_sim tool. Returns 0 on success, 2 on usage or
/// configuration errors and 1 on runtime failures.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ris
