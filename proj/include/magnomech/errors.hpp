#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace magnomech {

/// Invalid configuration file or command line (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A denominator vanished for the given parameter combination (CLI exit code 3).
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Drift matrix has a non-decaying eigenvalue; no steady state exists.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Population reached the top Fock level; the truncated result is untrustworthy.
struct TruncationLeakError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Time stepper failed its own consistency checks.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Collects non-fatal diagnostics. Operations never abort on a warning;
/// pass nullptr to ignore them.
using WarningLog = std::vector<std::string>;

inline void warn(WarningLog* log, std::string msg) {
    if (log) log->push_back(std::move(msg));
}

}  // namespace magnomech
