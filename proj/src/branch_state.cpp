#include "trimode/branch_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trimode {

namespace {

void check_amplitude(Complex value, const Caps& caps) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw InvalidConfig("make_state: amplitudes must be finite");
    }
    if (std::abs(value) > caps.amplitude_cap) {
        throw InvalidConfig("make_state: amplitude exceeds cap " +
                            std::to_string(caps.amplitude_cap));
    }
}

void check_arity(const BranchState& state, const char* who) {
    if (state.branches.empty()) {
        throw InvalidConfig(std::string(who) + ": state has no branches");
    }
    for (const auto& b : state.branches) {
        if (static_cast<int>(b.amps.size()) != state.modes) {
            throw InvalidConfig(std::string(who) + ": branch arity mismatch");
        }
    }
}

std::vector<int> complement_modes(int modes, const std::vector<int>& subset) {
    std::vector<bool> used(static_cast<std::size_t>(modes), false);
    for (int m : subset) {
        used[static_cast<std::size_t>(m)] = true;
    }
    std::vector<int> rest;
    for (int m = 0; m < modes; ++m) {
        if (!used[static_cast<std::size_t>(m)]) {
            rest.push_back(m);
        }
    }
    return rest;
}

}  // namespace

// ---- construction ----

double CatSpec::norm() const {
    const double n2 = 2.0 + 2.0 * std::cos(phase) * std::exp(-2.0 * std::norm(alpha));
    return n2 > 0.0 ? std::sqrt(n2) : 0.0;
}

Complex coherent_overlap(Complex a, Complex b) {
    return std::exp(Complex(-0.5 * std::norm(a) - 0.5 * std::norm(b), 0.0) +
                    std::conj(a) * b);
}

BranchState make_state(const std::vector<ModeSpec>& modes, const Caps& caps) {
    if (modes.empty()) {
        throw InvalidConfig("make_state: needs at least one mode");
    }
    if (caps.amplitude_cap <= 0.0 || caps.branch_cap < 1) {
        throw InvalidConfig("make_state: caps must be positive");
    }

    BranchState state;
    state.modes = static_cast<int>(modes.size());
    state.branches = {Branch{Complex(1.0, 0.0), {}}};
    for (const auto& spec : modes) {
        if (const auto* coherent = std::get_if<Complex>(&spec)) {
            check_amplitude(*coherent, caps);
            for (auto& b : state.branches) {
                b.amps.push_back(*coherent);
            }
            continue;
        }
        const auto& cat = std::get<CatSpec>(spec);
        check_amplitude(cat.alpha, caps);
        if (!std::isfinite(cat.phase)) {
            throw InvalidConfig("make_state: cat phase must be finite");
        }
        const double n = cat.norm();
        if (n * n <= 1e-12) {
            throw DegenerateCat("make_state: cat superposition has vanishing norm");
        }
        if (state.branches.size() * 2 > caps.branch_cap) {
            throw InvalidConfig("make_state: branch count exceeds cap " +
                                std::to_string(caps.branch_cap));
        }
        const Complex rel = std::exp(Complex(0.0, cat.phase));
        std::vector<Branch> doubled;
        doubled.reserve(state.branches.size() * 2);
        for (const auto& b : state.branches) {
            Branch plus = b;
            plus.coeff /= n;
            plus.amps.push_back(cat.alpha);
            Branch minus = b;
            minus.coeff *= rel / n;
            minus.amps.push_back(-cat.alpha);
            doubled.push_back(std::move(plus));
            doubled.push_back(std::move(minus));
        }
        state.branches = std::move(doubled);
    }
    state.normalized = true;
    return state;
}

BranchState make_state(const ModeSpec& mode_a, const ModeSpec& mode_b,
                       const ModeSpec& mode_c, const Caps& caps) {
    return make_state(std::vector<ModeSpec>{mode_a, mode_b, mode_c}, caps);
}

// ---- norms and overlaps ----

Complex inner_product(const BranchState& bra, const BranchState& ket) {
    check_arity(bra, "inner_product");
    check_arity(ket, "inner_product");
    if (bra.modes != ket.modes) {
        throw InvalidConfig("inner_product: mode count mismatch");
    }
    Complex total(0.0, 0.0);
    for (const auto& bj : bra.branches) {
        for (const auto& bk : ket.branches) {
            Complex term = std::conj(bj.coeff) * bk.coeff;
            for (int m = 0; m < bra.modes; ++m) {
                term *= coherent_overlap(bj.amps[static_cast<std::size_t>(m)],
                                         bk.amps[static_cast<std::size_t>(m)]);
            }
            total += term;
        }
    }
    return total;
}

double norm_squared(const BranchState& state) {
    return inner_product(state, state).real();
}

double fidelity(const BranchState& a, const BranchState& b) {
    return std::norm(inner_product(a, b));
}

BranchState normalize(BranchState state) {
    const double n2 = norm_squared(state);
    if (n2 <= 1e-24) {
        throw NotNormalized("normalize: state norm vanishes");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& b : state.branches) {
        b.coeff *= inv;
    }
    state.normalized = true;
    return state;
}

// ---- evolution ----

BranchState evolve(const BranchState& state, const PropagatorMatrix& m) {
    check_arity(state, "evolve");
    if (state.modes != 3) {
        throw InvalidConfig("evolve: propagator acts on three modes");
    }
    BranchState out = state;
    for (auto& b : out.branches) {
        const Eigen::Vector3cd in(b.amps[0], b.amps[1], b.amps[2]);
        const Eigen::Vector3cd mapped = m.entries * in;
        for (int row = 0; row < 3; ++row) {
            b.amps[static_cast<std::size_t>(row)] =
                m.free_phases[static_cast<std::size_t>(row)] * mapped(row);
        }
    }
    return out;
}

BranchState apply_matrix(const BranchState& state, const Eigen::MatrixXcd& m) {
    check_arity(state, "apply_matrix");
    if (m.rows() != state.modes || m.cols() != state.modes) {
        throw InvalidConfig("apply_matrix: matrix size must match mode count");
    }
    BranchState out = state;
    Eigen::VectorXcd in(state.modes);
    for (auto& b : out.branches) {
        for (int mode = 0; mode < state.modes; ++mode) {
            in(mode) = b.amps[static_cast<std::size_t>(mode)];
        }
        const Eigen::VectorXcd mapped = m * in;
        for (int mode = 0; mode < state.modes; ++mode) {
            b.amps[static_cast<std::size_t>(mode)] = mapped(mode);
        }
    }
    return out;
}

// ---- Gram reductions ----

Eigen::MatrixXcd gram_matrix(const BranchState& state, const std::vector<int>& mode_subset) {
    check_arity(state, "gram_matrix");
    if (mode_subset.empty()) {
        throw InvalidConfig("gram_matrix: subset must be nonempty");
    }
    for (int m : mode_subset) {
        if (m < 0 || m >= state.modes) {
            throw InvalidConfig("gram_matrix: mode index out of range");
        }
    }
    const auto k = static_cast<Eigen::Index>(state.branches.size());
    Eigen::MatrixXcd g(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index l = 0; l < k; ++l) {
            Complex prod(1.0, 0.0);
            for (int m : mode_subset) {
                prod *= coherent_overlap(
                    state.branches[static_cast<std::size_t>(j)].amps[static_cast<std::size_t>(m)],
                    state.branches[static_cast<std::size_t>(l)].amps[static_cast<std::size_t>(m)]);
            }
            g(j, l) = prod;
        }
    }
    return g;
}

std::vector<double> reduced_spectrum(const BranchState& state, const std::vector<int>& cut_modes) {
    check_arity(state, "reduced_spectrum");
    if (!state.normalized) {
        throw NotNormalized("reduced_spectrum: state must be normalized");
    }
    if (cut_modes.empty() || static_cast<int>(cut_modes.size()) >= state.modes) {
        throw InvalidConfig("reduced_spectrum: cut must be a proper bipartition");
    }
    const std::vector<int> rest = complement_modes(state.modes, cut_modes);
    if (rest.size() + cut_modes.size() != static_cast<std::size_t>(state.modes)) {
        throw InvalidConfig("reduced_spectrum: duplicate mode in cut");
    }

    const Eigen::MatrixXcd g_cut = gram_matrix(state, cut_modes);
    const Eigen::MatrixXcd g_rest = gram_matrix(state, rest);
    const auto k = g_cut.rows();

    // rho_cut = sum_{jl} B_{jl} |cut_j><cut_l| with B_{jl} = c_j c_l* (G_rest)_{lj};
    // its nonzero spectrum equals that of the Hermitian product S B S with
    // S = G_cut^{1/2}.
    Eigen::MatrixXcd b(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index l = 0; l < k; ++l) {
            b(j, l) = state.branches[static_cast<std::size_t>(j)].coeff *
                      std::conj(state.branches[static_cast<std::size_t>(l)].coeff) *
                      g_rest(l, j);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram_eig(g_cut);
    Eigen::VectorXd roots = gram_eig.eigenvalues();
    for (Eigen::Index i = 0; i < k; ++i) {
        roots(i) = roots(i) > 0.0 ? std::sqrt(roots(i)) : 0.0;
    }
    const Eigen::MatrixXcd s =
        gram_eig.eigenvectors() * roots.asDiagonal() * gram_eig.eigenvectors().adjoint();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rho_eig(s * b * s);
    std::vector<double> spectrum;
    spectrum.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
        double p = rho_eig.eigenvalues()(i);
        if (p < -1e-12) {
            throw NotNormalized("reduced_spectrum: spectrum has a negative weight");
        }
        p = std::max(p, 0.0);
        if (p > 1e-14) {
            spectrum.push_back(p);
        }
    }
    std::sort(spectrum.rbegin(), spectrum.rend());
    return spectrum;
}

std::vector<double> mean_photons(const BranchState& state) {
    check_arity(state, "mean_photons");
    const double n2 = state.normalized ? 1.0 : norm_squared(state);
    std::vector<double> out(static_cast<std::size_t>(state.modes), 0.0);
    for (int m = 0; m < state.modes; ++m) {
        Complex acc(0.0, 0.0);
        for (const auto& bj : state.branches) {
            for (const auto& bk : state.branches) {
                Complex term = std::conj(bj.coeff) * bk.coeff *
                               std::conj(bj.amps[static_cast<std::size_t>(m)]) *
                               bk.amps[static_cast<std::size_t>(m)];
                for (int l = 0; l < state.modes; ++l) {
                    term *= coherent_overlap(bj.amps[static_cast<std::size_t>(l)],
                                             bk.amps[static_cast<std::size_t>(l)]);
                }
                acc += term;
            }
        }
        out[static_cast<std::size_t>(m)] = acc.real() / n2;
    }
    return out;
}

BranchState compact(BranchState state, double tol) {
    auto& v = state.branches;
    v.erase(std::remove_if(v.begin(), v.end(),
                           [tol](const Branch& b) { return std::abs(b.coeff) < tol; }),
            v.end());
    if (v.empty()) {
        throw InvalidConfig("compact: all branches removed");
    }
    return state;
}

std::optional<BranchState> factor_out_mode(const BranchState& state, int mode, double tol) {
    check_arity(state, "factor_out_mode");
    if (mode < 0 || mode >= state.modes) {
        throw InvalidConfig("factor_out_mode: mode index out of range");
    }
    if (state.modes < 2) {
        throw InvalidConfig("factor_out_mode: need at least two modes");
    }
    const Complex shared = state.branches.front().amps[static_cast<std::size_t>(mode)];
    for (const auto& b : state.branches) {
        if (std::abs(b.amps[static_cast<std::size_t>(mode)] - shared) > tol) {
            return std::nullopt;
        }
    }
    BranchState out;
    out.modes = state.modes - 1;
    out.normalized = state.normalized;
    out.branches.reserve(state.branches.size());
    for (const auto& b : state.branches) {
        Branch nb;
        nb.coeff = b.coeff;
        for (int m = 0; m < state.modes; ++m) {
            if (m != mode) {
                nb.amps.push_back(b.amps[static_cast<std::size_t>(m)]);
            }
        }
        out.branches.push_back(std::move(nb));
    }
    return out;
}

}  // namespace trimode
