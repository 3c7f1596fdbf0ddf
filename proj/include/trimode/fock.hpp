// fock.hpp: truncated number-basis representation of the three modes.
// Serves as the independent brute-force check on the closed-form branch
// evolution: states are expanded in Fock space, evolved by the exchange
// Hamiltonian, and compared by fidelity and reduced spectra.
//
// The Hamiltonian conserves total photon number, so evolution proceeds
// sector by sector; within each occupied sector the propagator action
// exp(-iHt)v is applied by a Lanczos scheme, never by densifying H.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "trimode/branch_state.hpp"
#include "trimode/errors.hpp"
#include "trimode/propagator.hpp"

namespace trimode {

struct FockCutoff {
    int n_max = 1;                     // per-mode occupation cutoff
    std::optional<int> sector_total;   // restrict to fixed total photon number

    // Guards n_max >= 1 and full-space dimension (n_max+1)^3 <= 1e7.
    void validate() const;

    // Full space: (n_max+1)^3.  Sector n <= n_max: (n+1)(n+2)/2; larger
    // totals lose the states clipped by the per-mode cutoff.
    Eigen::Index dimension() const;
};

struct FockStateVector {
    FockCutoff cutoff;
    Eigen::VectorXcd amps;

    double deficiency() const;  // 1 - <psi|psi>
};

// Flat index of |na, nb, nc> under the cutoff; throws InvalidConfig when the
// occupation lies outside the space.
Eigen::Index fock_index(const FockCutoff& cutoff, int na, int nb, int nc);

// Occupations (na, nb, nc) of a flat index.
std::array<int, 3> fock_occupation(const FockCutoff& cutoff, Eigen::Index index);

// Cutoff rule n_max = ceil(mu + 8 sqrt(mu) + 10) for max per-mode mean mu.
int default_cutoff(double mean_photons);

// Exchange Hamiltonian lambda (e^{i phi} a+b + h.c.) + kappa (e^{i theta}
// a+c + h.c.) on the truncated space; requires zero detuning (the
// time-dependent frame is handled inside evolve_fock only).
Eigen::SparseMatrix<Complex> build_hamiltonian(const CouplingConfig& config,
                                               const FockCutoff& cutoff);

// Evolves psi0 for time t: sector-blocked exp(-iHt) on resonance, adaptive
// integration of the time-dependent frame otherwise, then the free-rotation
// phases e^{-i(omega_a na + omega_b nb + omega_c nc) t}.  Throws
// TruncationBreach when the norm drifts by more than truncation_tol.
FockStateVector evolve_fock(const FockStateVector& psi0, const CouplingConfig& config,
                            double t, double truncation_tol = 1e-8);

// Expands a branch state in the number basis (full space only).  Throws
// TruncationBreach when a branch's per-mode Poisson tail beyond n_max
// reaches truncation_tol.
FockStateVector branch_to_fock(const BranchState& state, const FockCutoff& cutoff,
                               double truncation_tol = 1e-8);

// |<psi|phi>|^2; cutoffs must match exactly.
double fock_fidelity(const FockStateVector& psi, const FockStateVector& phi);

// Mean photon number per mode, normalized by the vector's norm.
std::array<double, 3> mean_photon_numbers(const FockStateVector& psi);

// Single-mode reduced density matrix (full space only), trace-normalized.
Eigen::MatrixXcd reduced_density(const FockStateVector& psi, int mode);

// Descending nonzero eigenvalues of reduced_density.
std::vector<double> reduced_spectrum(const FockStateVector& psi, int mode);

}  // namespace trimode
