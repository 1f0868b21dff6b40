#pragma once

#include <string>
#include <vector>

namespace magnomech::cli {

/// Entry point shared by the binary and the tests. argv-style arguments,
/// without the program name. Returns the process exit code:
///   0  success
///   2  bad usage or configuration
///   3  instability, singularity, or truncation failure from the library
int run(const std::vector<std::string>& args);

}  // namespace magnomech::cli
