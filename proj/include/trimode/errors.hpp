// errors.hpp: exception hierarchy shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace trimode {

// Coupling parameters violate a precondition (Omega != Gamma, lambda=kappa=0, ...).
struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operation requires the resonant regime (Omega = 0).
struct NotResonant : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Cat superposition with vanishing norm (alpha = 0, Phi = pi).
struct DegenerateCat : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested Fock truncation exceeds the dimension guard.
struct CutoffTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Truncated representation lost more norm than the certification tolerance.
struct TruncationBreach : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two Fock vectors with different truncations were combined.
struct CutoffMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A state that must be normalized is not.
struct NotNormalized : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A characteristic-function exponent would overflow double precision.
struct OverflowGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario file failed to parse or validate (CLI exit code 2).
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace trimode
