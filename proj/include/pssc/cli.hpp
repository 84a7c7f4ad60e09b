#pragma once

#include <string>
#include <vector>

namespace pssc {

/// Entry point of the `pssc` tool. Returns 0 on success, 1 on a usage error
/// and 2 when the requested work fails.
int cli_main(int argc, char** argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace pssc
