#pragma once

#include <string>
#include <vector>

namespace deskmd {

// Exit codes: 0 success, 1 usage error, 2 runtime error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args exclude the program name

// Environment variable consulted for the worker count when --workers is absent.
inline constexpr const char* kWorkersEnv = "DESKMD_WORKERS";

}  // namespace deskmd
