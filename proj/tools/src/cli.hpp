#pragma once

#include <string>
#include <vector>

namespace besovlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

/// Entry point of the besovlab tool. Returns 0 when every check passes,
/// 1 when a check fails (outputs are still written) and 2 for usage or
/// configuration errors (nothing is written).
int cli_main(int argc, char** argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace besovlab::cli
