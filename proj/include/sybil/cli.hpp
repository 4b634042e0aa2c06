#pragma once

#include <ostream>

namespace sybil {

/// Exit status: 0 when expectations hold (no registry mismatches, every case
/// passes, every replay reproduces), 1 when they do not, 2 on usage or input
/// errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sybil
