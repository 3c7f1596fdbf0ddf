#include "trimode/charfun.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "trimode/branch_state.hpp"
#include "trimode/propagator.hpp"

using trimode::BranchState;
using trimode::CatSpec;
using trimode::Complex;
using trimode::CouplingConfig;
using trimode::ModeSpec;
using trimode::PhasePoint;

namespace {

const double kPi = std::acos(-1.0);
const Complex kI(0.0, 1.0);

PhasePoint random_point(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> coord(-radius, radius);
    return PhasePoint{Complex(coord(rng), coord(rng)), Complex(coord(rng), coord(rng)),
                      Complex(coord(rng), coord(rng))};
}

double point_weight(const PhasePoint& p) {
    return std::norm(p.eta) + std::norm(p.zeta) + std::norm(p.xi);
}

}  // namespace

TEST_CASE("rotated arguments follow the adjoint propagator") {
    const auto c = CouplingConfig::resonant_coupler(1.0, 1.0);
    const auto identity = trimode::compute_coefficients(c, 0.0);
    const PhasePoint p{Complex(0.3, -0.2), Complex(1.1, 0.0), Complex(0.0, 0.4)};
    const auto same = trimode::rotate_args(identity, p);
    CHECK(std::abs(same.eta_bar - p.eta) < 1e-15);
    CHECK(std::abs(same.zeta_bar - p.zeta) < 1e-15);
    CHECK(std::abs(same.xi_bar - p.xi) < 1e-15);

    const auto conversion = trimode::compute_coefficients(c, kPi / (2.0 * c.rabi()));
    const auto rotated = trimode::rotate_args(conversion, PhasePoint{Complex(1, 0), {}, {}});
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(rotated.eta_bar) < 1e-15);
    CHECK(std::abs(rotated.zeta_bar - kI * r) < 1e-15);
    CHECK(std::abs(rotated.xi_bar - kI * r) < 1e-15);

    const auto zero = trimode::rotate_args(conversion, PhasePoint{});
    CHECK(std::abs(zero.eta_bar) == 0.0);
    CHECK(std::abs(zero.zeta_bar) == 0.0);
    CHECK(std::abs(zero.xi_bar) == 0.0);
}

TEST_CASE("rotation preserves the argument norm") {
    std::mt19937_64 rng(0x5eed0005);
    std::uniform_real_distribution<double> coupling(0.1, 1.5);
    std::uniform_real_distribution<double> detune(-2.0, 2.0);
    std::uniform_real_distribution<double> time(0.0, 5.0);
    for (int i = 0; i < 50; ++i) {
        auto c = CouplingConfig::detuned_coupler(coupling(rng), coupling(rng), 0.0);
        c.omega_a = 1.3;
        c.omega_b = -0.4;
        c.omega_c = 0.8;
        const double offset = detune(rng);
        c.nu = c.omega_a - c.omega_b - offset;
        c.mu = c.omega_a - c.omega_c - offset;
        const auto m = trimode::compute_coefficients(c, time(rng));
        const auto p = random_point(rng, 2.0);
        const auto r = trimode::rotate_args(m, p);
        const double before = point_weight(p);
        const double after =
            std::norm(r.eta_bar) + std::norm(r.zeta_bar) + std::norm(r.xi_bar);
        CHECK(std::abs(after - before) < 1e-10);
    }
}

TEST_CASE("vacuum characteristic function is one") {
    const auto vacuum = trimode::make_state(Complex(0, 0), Complex(0, 0), Complex(0, 0));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        const auto p = random_point(rng, 3.0);
        CHECK(std::abs(trimode::chi_normal(vacuum, p) - 1.0) < 1e-14);
    }
}

TEST_CASE("coherent product state gives a pure phase") {
    const Complex x(0.7, -0.1);
    const Complex y(-0.4, 0.9);
    const Complex z(0.0, 1.2);
    const auto state = trimode::make_state(x, y, z);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        const auto p = random_point(rng, 2.5);
        const Complex expected =
            std::exp(p.eta * std::conj(x) - std::conj(p.eta) * x +
                     p.zeta * std::conj(y) - std::conj(p.zeta) * y +
                     p.xi * std::conj(z) - std::conj(p.xi) * z);
        CHECK(std::abs(trimode::chi_normal(state, p) - expected) < 1e-13);
    }
}

TEST_CASE("cat characteristic function matches the four-term sum") {
    const double alpha = 2.0;
    const double eta = 0.3;
    const auto state = trimode::make_state(CatSpec{Complex(alpha, 0.0), 0.0},
                                           Complex(0, 0), Complex(0, 0));
    // Hand-expanded branch-pair sum for real alpha, real eta.
    const double n2 = 2.0 + 2.0 * std::exp(-2.0 * alpha * alpha);
    const double expected = (2.0 + std::exp(2.0 * eta * alpha - 2.0 * alpha * alpha) +
                             std::exp(-2.0 * eta * alpha - 2.0 * alpha * alpha)) /
                            n2;
    const Complex value =
        trimode::chi_normal(state, PhasePoint{Complex(eta, 0.0), {}, {}});
    CHECK(std::abs(value - expected) < 1e-14);
}

TEST_CASE("unit value at the origin for random states") {
    std::mt19937_64 rng(0x5eed0006);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int i = 0; i < 10; ++i) {
        const auto state = trimode::make_state(
            CatSpec{Complex(amp(rng), amp(rng)), angle(rng)},
            Complex(amp(rng), amp(rng)), CatSpec{Complex(amp(rng), amp(rng)), angle(rng)});
        CHECK(std::abs(trimode::chi_normal(state, PhasePoint{}) - 1.0) < 1e-12);
    }
}

TEST_CASE("symmetric and normal orderings differ by a Gaussian") {
    const auto state = trimode::make_state(CatSpec{Complex(1.5, 0.5), 0.7},
                                           Complex(0.3, 0.0), Complex(0, 0));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const auto p = random_point(rng, 2.0);
        const Complex normal = trimode::chi_normal(state, p);
        const Complex symmetric = trimode::chi_symmetric(state, p);
        CHECK(std::abs(symmetric - normal * std::exp(-0.5 * point_weight(p))) < 1e-12);
        CHECK(std::abs(symmetric) < 1.0 + 1e-12);
    }
}

TEST_CASE("evolved characteristic function factorizes over rotated arguments") {
    std::mt19937_64 rng(0x5eed0007);
    std::uniform_real_distribution<double> amp(-1.5, 1.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> coupling(0.2, 1.4);
    std::uniform_real_distribution<double> time(0.0, 4.0);

    for (int trial = 0; trial < 3; ++trial) {
        const ModeSpec spec_a = CatSpec{Complex(amp(rng), amp(rng)), angle(rng)};
        const ModeSpec spec_b = Complex(amp(rng), amp(rng));
        const ModeSpec spec_c = CatSpec{Complex(amp(rng), amp(rng)), angle(rng)};
        const auto state = trimode::make_state(spec_a, spec_b, spec_c);
        const auto mono_a = trimode::make_state(std::vector<ModeSpec>{spec_a});
        const auto mono_b = trimode::make_state(std::vector<ModeSpec>{spec_b});
        const auto mono_c = trimode::make_state(std::vector<ModeSpec>{spec_c});

        auto c = CouplingConfig::detuned_coupler(coupling(rng), coupling(rng), 0.0,
                                                 angle(rng), angle(rng));
        c.omega_a = 0.9;
        c.omega_b = 0.2;
        c.omega_c = -0.5;
        c.nu = c.omega_a - c.omega_b - 0.7;
        c.mu = c.omega_a - c.omega_c - 0.7;
        const auto m = trimode::compute_coefficients(c, time(rng));
        const auto evolved = trimode::evolve(state, m);

        for (int i = 0; i < 10; ++i) {
            const auto p = random_point(rng, 1.5);
            const auto bar = trimode::rotate_args(m, p);
            const Complex lhs = trimode::chi_normal(evolved, p);
            const Complex rhs =
                trimode::chi_normal(mono_a, std::vector<Complex>{bar.eta_bar}) *
                trimode::chi_normal(mono_b, std::vector<Complex>{bar.zeta_bar}) *
                trimode::chi_normal(mono_c, std::vector<Complex>{bar.xi_bar});
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("argument and overflow guards") {
    const auto vacuum = trimode::make_state(Complex(0, 0), Complex(0, 0), Complex(0, 0));
    CHECK_THROWS_AS(trimode::chi_normal(vacuum, PhasePoint{Complex(60.0, 0.0), {}, {}}),
                    trimode::InvalidConfig);
    CHECK_THROWS_AS(
        trimode::chi_normal(vacuum,
                            PhasePoint{Complex(std::nan(""), 0.0), {}, {}}),
        trimode::InvalidConfig);

    auto state = trimode::make_state(Complex(0, 0), Complex(0, 0), Complex(0, 0));
    state.normalized = false;
    CHECK_THROWS_AS(trimode::chi_normal(state, PhasePoint{}), trimode::NotNormalized);

    const auto wide = trimode::make_state(CatSpec{Complex(20.0, 0.0), 0.0}, Complex(0, 0),
                                          Complex(0, 0));
    CHECK_THROWS_AS(trimode::chi_normal(wide, PhasePoint{Complex(50.0, 0.0), {}, {}}),
                    trimode::OverflowGuard);

    CHECK_THROWS_AS(trimode::chi_normal(vacuum, std::vector<Complex>{Complex(0, 0)}),
                    trimode::InvalidConfig);
}
