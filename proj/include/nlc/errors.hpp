#pragma once

#include <stdexcept>
#include <string>

namespace nlc {

/// Invalid user input: configuration values, preconditions on arguments.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative solver (or the flow itself) failed; carries a summary.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A recomputation disagreed with recorded output.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlc
