#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sshbp::cli {

/// Entry point shared by the `sshbp` executable and the tests. `args`
/// excludes the program name. Returns the process exit status:
/// 0 on success, 2 for invalid configuration or usage, 1 for runtime failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "SSHBP_OUTPUT_ROOT";

} // namespace sshbp::cli
