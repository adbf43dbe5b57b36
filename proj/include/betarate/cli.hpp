#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betarate::app {

// Runs one CLI invocation (args exclude the program name) and writes the
// structured-text or JSON result to `out`. Returns 0 on success, 1 on a
// computation error, 2 on a usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

}  // namespace betarate::app
