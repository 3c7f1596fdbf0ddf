// branch_state.hpp: exact representation of multimode states that are
// finite superpositions of products of coherent states ("branches").
//
// The class of such states is closed under passive linear evolution: a mode
// matrix maps each branch's amplitude vector while the coefficients stay
// fixed.  Norms, overlaps, and reduced spectra then follow in closed form
// from Gram matrices of per-mode coherent overlaps.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "trimode/errors.hpp"
#include "trimode/propagator.hpp"

namespace trimode {

// Construction-time bounds.  The amplitude cap keeps overlap exponentials
// representable; unitary evolution preserves each branch's total amplitude
// 2-norm, so evolved states stay representable without re-checking.
struct Caps {
    double amplitude_cap = 20.0;
    std::size_t branch_cap = 64;
};

struct Branch {
    Complex coeff;
    std::vector<Complex> amps;  // one coherent amplitude per mode
};

struct BranchState {
    int modes = 3;
    std::vector<Branch> branches;
    bool normalized = false;
};

// Superposition of |alpha> and |-alpha> with relative phase `phase`;
// phase 0 is the even cat, pi the odd cat, pi/2 the Yurke-Stoler state.
struct CatSpec {
    Complex alpha;
    double phase = 0.0;

    double norm() const;  // sqrt(2 + 2 cos(phase) e^{-2|alpha|^2})
};

using ModeSpec = std::variant<Complex, CatSpec>;

// <a|b> for coherent states: exp(-|a|^2/2 - |b|^2/2 + conj(a) b).
Complex coherent_overlap(Complex a, Complex b);

// Product state with one branch per combination of cat components,
// normalized.  Throws DegenerateCat when a cat norm vanishes and
// InvalidConfig on cap violations.
BranchState make_state(const std::vector<ModeSpec>& modes, const Caps& caps = {});
BranchState make_state(const ModeSpec& mode_a, const ModeSpec& mode_b,
                       const ModeSpec& mode_c, const Caps& caps = {});

Complex inner_product(const BranchState& bra, const BranchState& ket);
double norm_squared(const BranchState& state);
double fidelity(const BranchState& a, const BranchState& b);

// Rescales coefficients to unit norm and sets the flag.
BranchState normalize(BranchState state);

// Maps every branch amplitude vector by the propagator (interaction entries
// followed by the free phases); coefficients unchanged, norm preserved.
BranchState evolve(const BranchState& state, const PropagatorMatrix& m);

// Same for an arbitrary square mode matrix (must be unitary to keep the
// normalized flag meaningful); used by the beam-splitter network.
BranchState apply_matrix(const BranchState& state, const Eigen::MatrixXcd& m);

// G_{jk} = prod_{m in subset} <amps_j[m]|amps_k[m]>; Hermitian PSD with
// unit diagonal.
Eigen::MatrixXcd gram_matrix(const BranchState& state, const std::vector<int>& mode_subset);

// Nonzero eigenvalues of the reduced density operator on `cut_modes`,
// descending, clamped at zero, summing to 1.  Requires a normalized state
// and a proper bipartition.
std::vector<double> reduced_spectrum(const BranchState& state, const std::vector<int>& cut_modes);

// Mean photon number per mode.
std::vector<double> mean_photons(const BranchState& state);

// Drops branches with |coeff| < tol.  Never applied implicitly.
BranchState compact(BranchState state, double tol = 1e-15);

// If every branch holds the same amplitude in `mode` (within tol), returns
// the state of the remaining modes; otherwise nullopt.
std::optional<BranchState> factor_out_mode(const BranchState& state, int mode,
                                           double tol = 1e-8);

}  // namespace trimode
