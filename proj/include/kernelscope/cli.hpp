#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kernelscope::cli {

// Exit codes: 0 success, 1 analysis or tolerance failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Directory holding the bundled fixtures (table2.csv, p100.json); the
// KERNELSCOPE_FIXTURES environment variable overrides the built-in default.
std::string fixture_dir();

// Full command dispatch; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace kernelscope::cli
