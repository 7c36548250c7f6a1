#pragma once

#include <string>
#include <vector>

namespace climact {

/// Entry point of the climact tool. Exit codes: 0 success, 1 validation
/// or usage error, 2 inference failure.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace climact
