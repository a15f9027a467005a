#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwetk {

/// Runs the mwetk command line. "-" or a missing path means stdin/stdout.
/// Returns 0 on success, 1 for usage errors and 2 for data errors.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace mwetk
