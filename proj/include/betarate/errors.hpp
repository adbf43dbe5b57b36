#pragma once

#include <stdexcept>

namespace betarate {

// An optional backend cannot serve the requested parameter region;
// callers fall back to the canonical route.
struct unsupported_domain : std::domain_error {
    using std::domain_error::domain_error;
};

// Unrecoverable numeric failure (degenerate recurrence, non-converging
// continued fraction, ...).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input size exceeds the supported bound for a finite-sum evaluation.
struct size_error : std::length_error {
    using std::length_error::length_error;
};

// Design search exhausted its cap without a feasible configuration.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace betarate
