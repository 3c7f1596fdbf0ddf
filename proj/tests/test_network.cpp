#include "trimode/network.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

using trimode::BeamSplitterSpec;
using trimode::CatSpec;
using trimode::Complex;

namespace {

const double kPi = std::acos(-1.0);

std::array<BeamSplitterSpec, 3> angles(double v1, double v2, double v3) {
    return {BeamSplitterSpec{v1}, BeamSplitterSpec{v2}, BeamSplitterSpec{v3}};
}

// The three splitters applied one at a time: BS1 on (a, v), BS2 on (a_t, b),
// BS3 on (a_r, c).
Eigen::Matrix4cd sequential_matrix(const std::array<BeamSplitterSpec, 3>& specs) {
    auto embed = [](int i, int j, const BeamSplitterSpec& s) {
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
        m(i, i) = s.transmission();
        m(i, j) = s.reflection();
        m(j, i) = s.reflection();
        m(j, j) = s.transmission();
        return m;
    };
    return embed(1, 3, specs[2]) * embed(0, 2, specs[1]) * embed(0, 1, specs[0]);
}

}  // namespace

TEST_CASE("splitter coefficients satisfy the unitarity budget") {
    std::mt19937_64 rng(0x5eed000a);
    std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
    for (int i = 0; i < 100; ++i) {
        const BeamSplitterSpec s{angle(rng)};
        CHECK(std::norm(s.transmission()) + std::norm(s.reflection()) ==
              doctest::Approx(1.0).epsilon(1e-14));
        const auto m = trimode::network_matrix(angles(angle(rng), angle(rng), angle(rng)));
        CHECK((m * m.adjoint() - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("composed matrix equals the three splitters applied in sequence") {
    std::mt19937_64 rng(0x5eed000b);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int i = 0; i < 20; ++i) {
        const auto specs = angles(angle(rng), angle(rng), angle(rng));
        const auto direct = trimode::network_matrix(specs);
        CHECK((direct - sequential_matrix(specs)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("vacuum inputs pass through unchanged") {
    const auto input = trimode::make_network_input(Complex(0, 0), Complex(0, 0), Complex(0, 0));
    const auto output = trimode::apply_network(input, angles(0.3, 1.1, 2.0));
    REQUIRE(output.branches.size() == 1);
    for (const auto& amp : output.branches[0].amps) {
        CHECK(std::abs(amp) < 1e-15);
    }
}

TEST_CASE("fully reflecting side splitters route a coherent beam to the pair ports") {
    const Complex alpha(1.3, -0.4);
    const auto input = trimode::make_network_input(alpha, Complex(0, 0), Complex(0, 0));
    const auto output = trimode::apply_network(input, angles(kPi / 4.0, kPi / 2.0, kPi / 2.0));
    REQUIRE(output.branches.size() == 1);
    const auto& amps = output.branches[0].amps;
    const Complex i_unit(0.0, 1.0);
    CHECK(std::abs(amps[0]) < 1e-15);
    CHECK(std::abs(amps[1]) < 1e-15);
    CHECK(std::abs(amps[2] - i_unit * alpha / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(amps[3] + alpha / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("first splitter angle controls the pair amplitude split") {
    const Complex alpha(0.8, 0.0);
    const auto input = trimode::make_network_input(alpha, Complex(0, 0), Complex(0, 0));
    const auto output = trimode::apply_network(input, angles(kPi / 3.0, kPi / 2.0, kPi / 2.0));
    const auto& amps = output.branches[0].amps;
    const Complex i_unit(0.0, 1.0);
    CHECK(std::abs(amps[2] - i_unit * 0.5 * alpha) < 1e-14);
    CHECK(std::abs(amps[3] - i_unit * i_unit * std::sqrt(3.0) / 2.0 * alpha) < 1e-14);
}

TEST_CASE("cat resource converts completely into pair entanglement") {
    const auto input = trimode::make_network_input(CatSpec{Complex(1.0, 0.0), 0.0},
                                                   Complex(0, 0), Complex(0, 0));
    const auto output = trimode::apply_network(input, angles(kPi / 4.0, kPi / 2.0, kPi / 2.0));
    const auto report = trimode::conversion_report(output);

    CHECK(report.purities.at("a_o") >= 1.0 - 1e-10);
    CHECK(report.purities.at("a_o_prime") >= 1.0 - 1e-10);
    CHECK(std::abs(report.branch_overlaps.at("b_o")) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::abs(report.branch_overlaps.at("c_o")) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    const double s = std::exp(-1.0);
    const double p_plus = (1.0 + s) * (1.0 + s) / (2.0 * (1.0 + s * s));
    const auto spectrum = trimode::reduced_spectrum(output, {2});
    REQUIRE(spectrum.size() == 2);
    CHECK(spectrum[0] == doctest::Approx(p_plus).epsilon(1e-12));
    CHECK(spectrum[0] == doctest::Approx(0.8240271368319425).epsilon(1e-12));
    CHECK(spectrum[1] == doctest::Approx(0.17597286316805716).epsilon(1e-12));

    REQUIRE(report.entropies_bits.count("b_o|c_o") == 1);
    CHECK(report.entropies_bits.at("b_o|c_o") ==
          doctest::Approx(0.6711874461252246).epsilon(1e-12));
}

TEST_CASE("classical side beams exit on the a-ports when conversion is complete") {
    const Complex beta(0.7, 0.1);
    const Complex gamma(-0.2, 0.5);
    const auto input =
        trimode::make_network_input(CatSpec{Complex(1.0, 0.0), 0.0}, beta, gamma);
    const auto output = trimode::apply_network(input, angles(kPi / 4.0, kPi / 2.0, kPi / 2.0));
    const Complex i_unit(0.0, 1.0);
    for (const auto& branch : output.branches) {
        CHECK(std::abs(branch.amps[0] - i_unit * beta) < 1e-14);
        CHECK(std::abs(branch.amps[1] - i_unit * gamma) < 1e-14);
    }
    const auto report = trimode::conversion_report(output);
    CHECK(report.purities.at("a_o") >= 1.0 - 1e-10);
    CHECK(report.purities.at("a_o_prime") >= 1.0 - 1e-10);
}

TEST_CASE("transparent side splitters leave the pair ports classical") {
    const Complex beta(0.7, 0.1);
    const Complex gamma(-0.2, 0.5);
    const auto input =
        trimode::make_network_input(CatSpec{Complex(1.0, 0.0), 0.0}, beta, gamma);
    const auto output = trimode::apply_network(input, angles(kPi / 4.0, 0.0, 0.0));
    for (const auto& branch : output.branches) {
        CHECK(std::abs(branch.amps[2] - beta) < 1e-14);
        CHECK(std::abs(branch.amps[3] - gamma) < 1e-14);
    }
    const auto report = trimode::conversion_report(output);
    CHECK(report.purities.at("b_o") >= 1.0 - 1e-12);
    CHECK(report.purities.at("c_o") >= 1.0 - 1e-12);
    CHECK(report.purities.at("a_o") < 1.0 - 1e-3);
    CHECK(report.purities.at("a_o_prime") < 1.0 - 1e-3);
    CHECK(report.entropies_bits.at("a_o|rest") ==
          doctest::Approx(report.entropies_bits.at("a_o_prime|rest")).epsilon(1e-10));
    CHECK(report.entropies_bits.at("b_o|rest") < 1e-12);
    CHECK(report.entropies_bits.count("b_o|c_o") == 0);
}

TEST_CASE("coherent-only inputs stay separable on every port") {
    const auto input = trimode::make_network_input(Complex(1.1, 0.3), Complex(-0.6, 0.2),
                                                   Complex(0.4, 0.4));
    const auto output = trimode::apply_network(input, angles(0.9, 1.7, 0.4));
    const auto report = trimode::conversion_report(output);
    for (const auto& [port, purity] : report.purities) {
        CAPTURE(port);
        CHECK(purity == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(report.entropies_bits.at("b_o|c_o") < 1e-12);
}

TEST_CASE("network conserves norm and total photon number") {
    std::mt19937_64 rng(0x5eed000c);
    std::uniform_real_distribution<double> amp(-1.5, 1.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int i = 0; i < 10; ++i) {
        const auto input = trimode::make_network_input(
            CatSpec{Complex(amp(rng), amp(rng)), angle(rng)}, Complex(amp(rng), amp(rng)),
            Complex(amp(rng), amp(rng)));
        const auto output =
            trimode::apply_network(input, angles(angle(rng), angle(rng), angle(rng)));
        CHECK(trimode::norm_squared(output) == doctest::Approx(1.0).epsilon(1e-12));

        const auto in_photons = trimode::mean_photons(input);
        const auto out_photons = trimode::mean_photons(output);
        double in_total = 0.0;
        double out_total = 0.0;
        for (int m = 0; m < 4; ++m) {
            in_total += in_photons[static_cast<std::size_t>(m)];
            out_total += out_photons[static_cast<std::size_t>(m)];
        }
        CHECK(in_total == doctest::Approx(out_total).epsilon(1e-10));
    }
}

TEST_CASE("network input helper pins the ancilla to vacuum") {
    const auto input = trimode::make_network_input(CatSpec{Complex(1.2, 0.0), 0.0},
                                                   Complex(0.3, 0.0), Complex(0, 0));
    CHECK(input.modes == 4);
    REQUIRE(input.branches.size() == 2);
    for (const auto& branch : input.branches) {
        CHECK(std::abs(branch.amps[1]) == 0.0);
    }
}

TEST_CASE("network rejects wrong arity and unnormalized states") {
    const auto three_mode = trimode::make_state(Complex(1, 0), Complex(0, 0), Complex(0, 0));
    CHECK_THROWS_AS(trimode::apply_network(three_mode, angles(0.1, 0.2, 0.3)),
                    trimode::InvalidConfig);
    CHECK_THROWS_AS(trimode::conversion_report(three_mode), trimode::InvalidConfig);

    auto input = trimode::make_network_input(Complex(1, 0), Complex(0, 0), Complex(0, 0));
    input.branches[0].coeff *= 2.0;
    input.normalized = false;
    CHECK_THROWS_AS(trimode::conversion_report(input), trimode::NotNormalized);
}
