#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levy {

/// Entry point of the `levyinv` tool. `args` excludes the program name.
/// Reports go to `out` (or the configured file), diagnostics to `err`.
/// Returns the process exit status (see ExitStatus).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levy
