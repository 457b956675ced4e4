#pragma once

#include <stdexcept>
#include <string>

namespace risklab {

/// Invalid argument values or model data (probabilities that do not sum to 1,
/// alpha outside (0,1], malformed maps, ...). Maps to CLI exit code 1.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A caller-supplied object broke its contract at use time (a policy returned
/// a non-distribution, a reward left [0,1], ...). Maps to CLI exit code 1.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Exhaustive enumeration would exceed the configured cap. Raised instead of
/// truncating silently.
struct OracleTooLarge : DomainError {
    using DomainError::DomainError;
};

/// Filesystem problems (missing input, unwritable output). Maps to CLI exit
/// code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace risklab
