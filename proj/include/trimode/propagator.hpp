// propagator.hpp: closed-form Heisenberg propagator for three bilinearly
// coupled bosonic modes driven by two classical pumps.
//
// Mode A is coupled to B and C by photon-number-conserving exchange terms
// with strengths lambda, kappa and pump phases phi, theta.  With equal
// detunings (Omega = Gamma) the interaction-frame evolution of the mode
// operators is a 3x3 unitary with entries known in closed form.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

#include "trimode/errors.hpp"

namespace trimode {

using Complex = std::complex<double>;

// Physical parameters of the three-mode coupler (hbar = 1; frequencies and
// couplings share one angular-frequency unit, time is its inverse).
struct CouplingConfig {
    double omega_a = 0.0;  // mode frequencies
    double omega_b = 0.0;
    double omega_c = 0.0;
    double lambda = 0.0;   // A-B coupling strength, >= 0
    double kappa = 0.0;    // A-C coupling strength, >= 0
    double nu = 0.0;       // pump frequencies
    double mu = 0.0;
    double phi = 0.0;      // pump phases
    double theta = 0.0;

    double detuning_ab() const { return omega_a - omega_b - nu; }   // Omega
    double detuning_ac() const { return omega_a - omega_c - mu; }   // Gamma

    // Effective Rabi-like frequency A = sqrt(Omega^2 + 4(kappa^2+lambda^2))/2.
    double rabi() const;

    bool resonant(double tol = 1e-12) const;

    // Throws InvalidConfig unless lambda,kappa >= 0 (not both zero), all
    // fields finite, and Omega == Gamma within relative tolerance 1e-12.
    void validate() const;

    // Convenience constructors used throughout the tests and scenarios:
    // all mode frequencies zero, pumps chosen to realize the detuning.
    static CouplingConfig resonant_coupler(double lambda, double kappa,
                                           double phi = 0.0, double theta = 0.0);
    static CouplingConfig detuned_coupler(double lambda, double kappa, double omega_detuning,
                                          double phi = 0.0, double theta = 0.0);
};

// Interaction-frame propagator entries plus the factored free-evolution
// phases e^{-i omega_x t}.  `entries` maps initial mode amplitudes to evolved
// ones in the frame rotating at the mode frequencies; `full()` includes the
// free rotation.
struct PropagatorMatrix {
    Eigen::Matrix3cd entries;
    double t = 0.0;
    std::array<Complex, 3> free_phases{Complex(1, 0), Complex(1, 0), Complex(1, 0)};

    Eigen::Matrix3cd full() const;
};

// Evaluates the nine closed-form coefficients at time t.  Any real t is
// accepted; the entries are unitary for all of them.  Throws InvalidConfig
// for invalid parameters.
PropagatorMatrix compute_coefficients(const CouplingConfig& config, double t);

// Max-norm of M^dagger M - I over the interaction-frame entries.
double unitarity_residual(const PropagatorMatrix& m);

// Times at which the resonant evolution returns to the identity
// (recurrence, t = 2n*pi/A) or exchanges the A-mode content completely
// (conversion, t = (n - 1/2)*pi/A), n = 1..n_max.
struct SpecialTimes {
    std::vector<double> recurrence;
    std::vector<double> conversion;
};

// Requires Omega = 0 (throws NotResonant otherwise) and n_max >= 1.
SpecialTimes special_times(const CouplingConfig& config, int n_max);

}  // namespace trimode
