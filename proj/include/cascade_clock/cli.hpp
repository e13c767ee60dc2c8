#pragma once

#include <iosfwd>

namespace cascade_clock {

/// Entry point of the `cascade-clock` tool. Returns 0 on success, 1 on a
/// usage error and 2 on a data error (bad input file, infeasible parameters).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cascade_clock
