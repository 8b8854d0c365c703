#pragma once

#include <stdexcept>
#include <string>

namespace qrr {

// Error taxonomy. The CLI maps these onto exit codes (see tools/qrrbench.cpp).
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input exceeds a hard resource cap (statevector width, brute-force size, machine size).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request is well-formed but outside the operation's domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed files, failed verification of persisted data.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qrr
