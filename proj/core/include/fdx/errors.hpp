// SPDX-License-Identifier: Apache-2.0
//
// Error taxonomy shared by the library and the CLI. Each exception type maps
// to a distinct process exit code so scripted callers can tell apart bad
// input, numerical failure and scenarios that are simply not runnable.

#pragma once

#include <stdexcept>
#include <string>

namespace fdx {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitRuntimeError = 2,
    kExitInfeasible = 3,
};

// Bad configuration: unknown key, unparsable value, out-of-range parameter.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure while running: rank-deficient regressor, shape mismatch,
// empty signal where one is required.
class EstimationError : public std::runtime_error {
  public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario that cannot be evaluated at all, e.g. a calibration window longer
// than the coherence interval it must fit into.
class InfeasibleError : public std::runtime_error {
  public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfigError;
    if (dynamic_cast<const InfeasibleError*>(&e)) return kExitInfeasible;
    return kExitRuntimeError;
}

}  // namespace fdx
