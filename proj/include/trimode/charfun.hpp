// charfun.hpp: normal-ordered and symmetric characteristic functions of
// branch states, plus the rotated-argument map induced by the propagator.
//
// For branch states both functions reduce to finite sums over branch pairs;
// each term's exponent is accumulated in log domain so that far-separated
// branches underflow to zero instead of overflowing.

#pragma once

#include <complex>
#include <vector>

#include "trimode/branch_state.hpp"
#include "trimode/propagator.hpp"

namespace trimode {

// Arguments (eta, zeta, xi) of the three-mode characteristic functions.
struct PhasePoint {
    Complex eta;
    Complex zeta;
    Complex xi;

    static constexpr double arg_cap = 50.0;

    // Throws InvalidConfig unless finite with |arg| <= arg_cap per mode.
    void validate() const;
};

struct RotatedArgs {
    Complex eta_bar;
    Complex zeta_bar;
    Complex xi_bar;
};

// Pulls the arguments back through the evolution: evaluating the evolved
// state's characteristic function at p equals evaluating the initial one at
// the rotated args.  Norm |p| is preserved (the map is the adjoint of the
// full propagator).
RotatedArgs rotate_args(const PropagatorMatrix& m, const PhasePoint& p);

// Tr[rho e^{eta a+} e^{-eta* a} ...], one argument per mode.  Throws
// OverflowGuard when a term's exponent exceeds the double range and
// NotNormalized for unnormalized states.
Complex chi_normal(const BranchState& state, const std::vector<Complex>& args);
Complex chi_normal(const BranchState& state, const PhasePoint& p);

// chi_S = chi_N * exp(-(|eta|^2+|zeta|^2+|xi|^2)/2).
Complex chi_symmetric(const BranchState& state, const PhasePoint& p);

}  // namespace trimode
