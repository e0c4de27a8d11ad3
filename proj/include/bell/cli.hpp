#pragma once

#include <iosfwd>

namespace bell::cli {

/// Parses and runs one command. Returns 0 on success, 1 on invalid input,
/// 2 on internal error. All output goes to the given streams, so a run is a
/// pure function of argv (plus any --output files it is asked to write).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bell::cli
