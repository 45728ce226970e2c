#pragma once

#include <iosfwd>

namespace nsplab {

/// Entry point of the `nsplab` command line tool. Subcommands: nsp-check,
/// width, bounds, recover, phase, preserve. Returns 0 on success, 1 on a
/// domain or input error and 2 on a usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nsplab
