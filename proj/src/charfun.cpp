#include "trimode/charfun.hpp"

#include <cmath>

namespace trimode {

namespace {

void check_arg(Complex value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw InvalidConfig("chi: arguments must be finite");
    }
    if (std::abs(value) > PhasePoint::arg_cap) {
        throw InvalidConfig("chi: argument magnitude exceeds cap");
    }
}

}  // namespace

void PhasePoint::validate() const {
    check_arg(eta);
    check_arg(zeta);
    check_arg(xi);
}

RotatedArgs rotate_args(const PropagatorMatrix& m, const PhasePoint& p) {
    p.validate();
    const Eigen::Vector3cd args(p.eta, p.zeta, p.xi);
    const Eigen::Vector3cd rotated = m.full().adjoint() * args;
    return RotatedArgs{rotated(0), rotated(1), rotated(2)};
}

Complex chi_normal(const BranchState& state, const std::vector<Complex>& args) {
    if (!state.normalized) {
        throw NotNormalized("chi_normal: state must be normalized");
    }
    if (static_cast<int>(args.size()) != state.modes) {
        throw InvalidConfig("chi_normal: one argument per mode required");
    }
    for (Complex arg : args) {
        check_arg(arg);
    }

    Complex total(0.0, 0.0);
    for (const auto& bj : state.branches) {
        for (const auto& bk : state.branches) {
            Complex exponent(0.0, 0.0);
            for (int m = 0; m < state.modes; ++m) {
                const Complex arg = args[static_cast<std::size_t>(m)];
                const Complex aj = bj.amps[static_cast<std::size_t>(m)];
                const Complex ak = bk.amps[static_cast<std::size_t>(m)];
                exponent += arg * std::conj(aj) - std::conj(arg) * ak -
                            Complex(0.5 * std::norm(aj) + 0.5 * std::norm(ak), 0.0) +
                            std::conj(aj) * ak;
            }
            if (exponent.real() > 700.0) {
                throw OverflowGuard("chi_normal: term exponent exceeds double range");
            }
            total += std::conj(bj.coeff) * bk.coeff * std::exp(exponent);
        }
    }
    return total;
}

Complex chi_normal(const BranchState& state, const PhasePoint& p) {
    if (state.modes != 3) {
        throw InvalidConfig("chi_normal: phase point form requires three modes");
    }
    return chi_normal(state, std::vector<Complex>{p.eta, p.zeta, p.xi});
}

Complex chi_symmetric(const BranchState& state, const PhasePoint& p) {
    const double weight =
        0.5 * (std::norm(p.eta) + std::norm(p.zeta) + std::norm(p.xi));
    return chi_normal(state, p) * std::exp(-weight);
}

}  // namespace trimode
