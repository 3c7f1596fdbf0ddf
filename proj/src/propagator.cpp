#include "trimode/propagator.hpp"

#include <cmath>
#include <string>

namespace trimode {

namespace {

const Complex kI(0.0, 1.0);

bool all_finite(const CouplingConfig& c) {
    return std::isfinite(c.omega_a) && std::isfinite(c.omega_b) &&
           std::isfinite(c.omega_c) && std::isfinite(c.lambda) &&
           std::isfinite(c.kappa) && std::isfinite(c.nu) &&
           std::isfinite(c.mu) && std::isfinite(c.phi) && std::isfinite(c.theta);
}

}  // namespace

// ---- CouplingConfig ----

double CouplingConfig::rabi() const {
    const double omega = detuning_ab();
    return std::sqrt(omega * omega + 4.0 * (kappa * kappa + lambda * lambda)) / 2.0;
}

bool CouplingConfig::resonant(double tol) const {
    const double scale = std::max({1.0, std::abs(omega_a), std::abs(omega_b), std::abs(nu)});
    return std::abs(detuning_ab()) <= tol * scale;
}

void CouplingConfig::validate() const {
    if (!all_finite(*this)) {
        throw InvalidConfig("CouplingConfig: all parameters must be finite");
    }
    if (lambda < 0.0 || kappa < 0.0) {
        throw InvalidConfig("CouplingConfig: coupling strengths must be non-negative");
    }
    if (lambda == 0.0 && kappa == 0.0) {
        throw InvalidConfig("CouplingConfig: at least one coupling must be non-zero");
    }
    const double omega = detuning_ab();
    const double gamma = detuning_ac();
    const double scale = std::max({1.0, std::abs(omega), std::abs(gamma)});
    if (std::abs(omega - gamma) > 1e-12 * scale) {
        throw InvalidConfig("CouplingConfig: detunings must match (omega_b + nu == omega_c + mu)");
    }
}

CouplingConfig CouplingConfig::resonant_coupler(double lambda, double kappa,
                                                double phi, double theta) {
    CouplingConfig c;
    c.lambda = lambda;
    c.kappa = kappa;
    c.phi = phi;
    c.theta = theta;
    c.validate();
    return c;
}

CouplingConfig CouplingConfig::detuned_coupler(double lambda, double kappa, double omega_detuning,
                                               double phi, double theta) {
    CouplingConfig c;
    c.lambda = lambda;
    c.kappa = kappa;
    c.nu = -omega_detuning;
    c.mu = -omega_detuning;
    c.phi = phi;
    c.theta = theta;
    c.validate();
    return c;
}

// ---- propagator ----

Eigen::Matrix3cd PropagatorMatrix::full() const {
    Eigen::Matrix3cd m = entries;
    for (int row = 0; row < 3; ++row) {
        m.row(row) *= free_phases[static_cast<std::size_t>(row)];
    }
    return m;
}

PropagatorMatrix compute_coefficients(const CouplingConfig& config, double t) {
    config.validate();
    if (!std::isfinite(t)) {
        throw InvalidConfig("compute_coefficients: t must be finite");
    }

    const double omega = config.detuning_ab();
    const double a_freq = config.rabi();
    const double g2 = config.kappa * config.kappa + config.lambda * config.lambda;

    const double s = std::sin(a_freq * t);
    const double c = std::cos(a_freq * t);
    const Complex f(c, omega / (2.0 * a_freq) * s);
    const Complex half_up = std::exp(kI * (omega * t / 2.0));
    const Complex half_dn = std::conj(half_up);
    const Complex lam_phase = config.lambda * std::exp(kI * config.phi);
    const Complex kap_phase = config.kappa * std::exp(kI * config.theta);
    // shared bracket [e^{-i Omega t/2} f(t) - 1] of the B/C block
    const Complex bracket = half_dn * f - 1.0;

    PropagatorMatrix result;
    result.t = t;
    auto& m = result.entries;
    m(0, 0) = half_up * std::conj(f);
    m(0, 1) = -kI * lam_phase * half_up * s / a_freq;
    m(0, 2) = -kI * kap_phase * half_up * s / a_freq;
    m(1, 0) = -kI * std::conj(lam_phase) * half_dn * s / a_freq;
    m(1, 1) = 1.0 + config.lambda * config.lambda / g2 * bracket;
    m(1, 2) = std::conj(lam_phase) * kap_phase / g2 * bracket;
    m(2, 0) = -kI * std::conj(kap_phase) * half_dn * s / a_freq;
    m(2, 1) = lam_phase * std::conj(kap_phase) / g2 * bracket;
    m(2, 2) = 1.0 + config.kappa * config.kappa / g2 * bracket;

    result.free_phases = {std::exp(-kI * (config.omega_a * t)),
                          std::exp(-kI * (config.omega_b * t)),
                          std::exp(-kI * (config.omega_c * t))};
    return result;
}

double unitarity_residual(const PropagatorMatrix& m) {
    const Eigen::Matrix3cd gram = m.entries.adjoint() * m.entries;
    return (gram - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff();
}

SpecialTimes special_times(const CouplingConfig& config, int n_max) {
    config.validate();
    if (!config.resonant()) {
        throw NotResonant("special_times: requires zero detuning");
    }
    if (n_max < 1) {
        throw InvalidConfig("special_times: n_max must be >= 1");
    }
    const double a_freq = config.rabi();
    const double pi = std::acos(-1.0);
    SpecialTimes times;
    times.recurrence.reserve(static_cast<std::size_t>(n_max));
    times.conversion.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        times.recurrence.push_back(2.0 * n * pi / a_freq);
        times.conversion.push_back((n - 0.5) * pi / a_freq);
    }
    return times;
}

}  // namespace trimode
