#include "trimode/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trimode/ode.hpp"

namespace trimode {

namespace {

const Complex kI(0.0, 1.0);

// ---- basis bookkeeping ----

struct SectorBasis {
    int n_max = 0;
    std::vector<std::array<int, 3>> states;
    std::vector<Eigen::Index> lookup;  // (na, nb) -> position or -1

    Eigen::Index index_of(int na, int nb) const {
        if (na < 0 || nb < 0 || na > n_max || nb > n_max) {
            return -1;
        }
        return lookup[static_cast<std::size_t>(na * (n_max + 1) + nb)];
    }
};

SectorBasis enumerate_sector(int total, int n_max) {
    SectorBasis basis;
    basis.n_max = n_max;
    basis.lookup.assign(static_cast<std::size_t>((n_max + 1) * (n_max + 1)), -1);
    for (int na = 0; na <= std::min(total, n_max); ++na) {
        for (int nb = 0; nb <= std::min(total - na, n_max); ++nb) {
            const int nc = total - na - nb;
            if (nc > n_max) {
                continue;
            }
            basis.lookup[static_cast<std::size_t>(na * (n_max + 1) + nb)] =
                static_cast<Eigen::Index>(basis.states.size());
            basis.states.push_back({na, nb, nc});
        }
    }
    return basis;
}

Eigen::Index flat_index(int n_max, int na, int nb, int nc) {
    const auto k = static_cast<Eigen::Index>(n_max + 1);
    return (static_cast<Eigen::Index>(na) * k + nb) * k + nc;
}

// One-directional photon hops (a raised, b or c lowered) with their matrix
// weights sqrt((na+1) n_partner); the Hermitian partner entries mirror these.
struct HopEntry {
    Eigen::Index row;  // raised-a state
    Eigen::Index col;  // source state
    double weight;
};

std::vector<HopEntry> hop_entries_full(const FockCutoff& cutoff, bool via_b) {
    std::vector<HopEntry> hops;
    const int k = cutoff.n_max;
    for (int na = 0; na < k; ++na) {
        for (int nb = 0; nb <= k; ++nb) {
            for (int nc = 0; nc <= k; ++nc) {
                const int partner = via_b ? nb : nc;
                if (partner < 1) {
                    continue;
                }
                const Eigen::Index row = via_b ? flat_index(k, na + 1, nb - 1, nc)
                                               : flat_index(k, na + 1, nb, nc - 1);
                hops.push_back({row, flat_index(k, na, nb, nc),
                                std::sqrt(static_cast<double>(na + 1) * partner)});
            }
        }
    }
    return hops;
}

std::vector<HopEntry> hop_entries_sector(const SectorBasis& basis, bool via_b) {
    std::vector<HopEntry> hops;
    for (std::size_t i = 0; i < basis.states.size(); ++i) {
        const auto [na, nb, nc] = basis.states[i];
        const int partner = via_b ? nb : nc;
        if (partner < 1) {
            continue;
        }
        const Eigen::Index row =
            via_b ? basis.index_of(na + 1, nb - 1) : basis.index_of(na + 1, nb);
        if (row < 0) {
            continue;
        }
        hops.push_back({row, static_cast<Eigen::Index>(i),
                        std::sqrt(static_cast<double>(na + 1) * partner)});
    }
    return hops;
}

Eigen::SparseMatrix<Complex> assemble_hermitian(Eigen::Index dim,
                                                const std::vector<HopEntry>& ab,
                                                const std::vector<HopEntry>& ac,
                                                Complex amp_ab, Complex amp_ac) {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(2 * (ab.size() + ac.size()));
    for (const auto& e : ab) {
        trips.emplace_back(e.row, e.col, amp_ab * e.weight);
        trips.emplace_back(e.col, e.row, std::conj(amp_ab) * e.weight);
    }
    for (const auto& e : ac) {
        trips.emplace_back(e.row, e.col, amp_ac * e.weight);
        trips.emplace_back(e.col, e.row, std::conj(amp_ac) * e.weight);
    }
    Eigen::SparseMatrix<Complex> h(dim, dim);
    h.setFromTriplets(trips.begin(), trips.end());
    return h;
}

Eigen::SparseMatrix<Complex> assemble_directional(Eigen::Index dim,
                                                  const std::vector<HopEntry>& hops) {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(hops.size());
    for (const auto& e : hops) {
        trips.emplace_back(e.row, e.col, Complex(e.weight, 0.0));
    }
    Eigen::SparseMatrix<Complex> m(dim, dim);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

// ---- Krylov propagation ----

double sparse_inf_norm(const Eigen::SparseMatrix<Complex>& h) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(h.rows());
    for (int outer = 0; outer < h.outerSize(); ++outer) {
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(h, outer); it; ++it) {
            row_sums(it.row()) += std::abs(it.value());
        }
    }
    return h.rows() > 0 ? row_sums.maxCoeff() : 0.0;
}

// One Lanczos step of exp(-i dt H) v with full reorthogonalization.
Eigen::VectorXcd lanczos_substep(const Eigen::SparseMatrix<Complex>& h,
                                 const Eigen::VectorXcd& v, double dt, double hnorm) {
    const double beta0 = v.norm();
    if (beta0 < 1e-300) {
        return v;
    }
    const auto n = v.size();
    const int m_max = static_cast<int>(std::min<Eigen::Index>(35, n));
    Eigen::MatrixXcd basis(n, m_max);
    Eigen::VectorXd alpha(m_max);
    Eigen::VectorXd beta(m_max);
    basis.col(0) = v / beta0;
    int m = m_max;
    for (int j = 0; j < m_max; ++j) {
        Eigen::VectorXcd w = h * basis.col(j);
        alpha(j) = basis.col(j).dot(w).real();
        w -= alpha(j) * basis.col(j);
        if (j > 0) {
            w -= beta(j - 1) * basis.col(j - 1);
        }
        for (int k = 0; k <= j; ++k) {
            w -= basis.col(k).dot(w) * basis.col(k);
        }
        const double b = w.norm();
        if (j + 1 == m_max || b <= 1e-13 * std::max(1.0, hnorm)) {
            m = j + 1;
            break;
        }
        beta(j) = b;
        basis.col(j + 1) = w / b;
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        tri(j, j) = alpha(j);
        if (j + 1 < m) {
            tri(j, j + 1) = beta(j);
            tri(j + 1, j) = beta(j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
    Eigen::VectorXcd coef =
        eig.eigenvectors().row(0).transpose().cast<Complex>() * beta0;
    for (int k = 0; k < m; ++k) {
        coef(k) *= std::exp(-kI * (dt * eig.eigenvalues()(k)));
    }
    return basis.leftCols(m) * (eig.eigenvectors().cast<Complex>() * coef);
}

Eigen::VectorXcd krylov_expmv(const Eigen::SparseMatrix<Complex>& h,
                              Eigen::VectorXcd v, double t) {
    const double hnorm = sparse_inf_norm(h);
    if (hnorm == 0.0 || t == 0.0) {
        return v;
    }
    const int substeps =
        std::max(1, static_cast<int>(std::ceil(std::abs(t) * hnorm / 6.0)));
    const double dt = t / substeps;
    for (int s = 0; s < substeps; ++s) {
        v = lanczos_substep(h, v, dt, hnorm);
    }
    return v;
}

Eigen::VectorXcd integrate_sector(const Eigen::VectorXcd& v,
                                  const Eigen::SparseMatrix<Complex>& t_ab,
                                  const Eigen::SparseMatrix<Complex>& t_ac,
                                  const CouplingConfig& config, double t) {
    const Complex lam = config.lambda * std::exp(kI * config.phi);
    const Complex kap = config.kappa * std::exp(kI * config.theta);
    const double omega = config.detuning_ab();
    const double gamma = config.detuning_ac();
    const Eigen::SparseMatrix<Complex> t_ba = t_ab.adjoint();
    const Eigen::SparseMatrix<Complex> t_ca = t_ac.adjoint();
    const auto rhs = [&](double s, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
        const Complex pab = lam * std::exp(kI * (omega * s));
        const Complex pac = kap * std::exp(kI * (gamma * s));
        return -kI * (pab * (t_ab * y) + std::conj(pab) * (t_ba * y) +
                      pac * (t_ac * y) + std::conj(pac) * (t_ca * y));
    };
    OdeOptions opt;
    opt.rtol = 1e-11;
    opt.atol = 1e-14;
    return integrate_adaptive(rhs, v, 0.0, t, opt);
}

Eigen::VectorXcd evolve_sector_vector(const Eigen::VectorXcd& v, const SectorBasis& basis,
                                      const CouplingConfig& config, double t) {
    const auto dim = static_cast<Eigen::Index>(basis.states.size());
    const auto ab = hop_entries_sector(basis, true);
    const auto ac = hop_entries_sector(basis, false);
    if (config.resonant()) {
        const auto h = assemble_hermitian(dim, ab, ac,
                                          config.lambda * std::exp(kI * config.phi),
                                          config.kappa * std::exp(kI * config.theta));
        return krylov_expmv(h, v, t);
    }
    return integrate_sector(v, assemble_directional(dim, ab),
                            assemble_directional(dim, ac), config, t);
}

double poisson_tail(double mean, int n_max) {
    if (mean <= 0.0) {
        return 0.0;
    }
    double term = std::exp(-mean);
    double cumulative = term;
    for (int n = 1; n <= n_max; ++n) {
        term *= mean / n;
        cumulative += term;
    }
    return std::max(0.0, 1.0 - cumulative);
}

}  // namespace

// ---- cutoff and indexing ----

void FockCutoff::validate() const {
    if (n_max < 1) {
        throw InvalidConfig("FockCutoff: n_max must be >= 1");
    }
    const double dim = std::pow(static_cast<double>(n_max) + 1.0, 3);
    if (dim > 1e7) {
        throw CutoffTooLarge("FockCutoff: full-space dimension exceeds 1e7");
    }
    if (sector_total && (*sector_total < 0 || *sector_total > 3 * n_max)) {
        throw InvalidConfig("FockCutoff: sector total outside the truncated space");
    }
}

Eigen::Index FockCutoff::dimension() const {
    validate();
    if (!sector_total) {
        const auto k = static_cast<Eigen::Index>(n_max + 1);
        return k * k * k;
    }
    return static_cast<Eigen::Index>(enumerate_sector(*sector_total, n_max).states.size());
}

Eigen::Index fock_index(const FockCutoff& cutoff, int na, int nb, int nc) {
    cutoff.validate();
    if (na < 0 || nb < 0 || nc < 0 || na > cutoff.n_max || nb > cutoff.n_max ||
        nc > cutoff.n_max) {
        throw InvalidConfig("fock_index: occupation outside the cutoff");
    }
    if (cutoff.sector_total) {
        if (na + nb + nc != *cutoff.sector_total) {
            throw InvalidConfig("fock_index: occupation outside the sector");
        }
        return enumerate_sector(*cutoff.sector_total, cutoff.n_max).index_of(na, nb);
    }
    return flat_index(cutoff.n_max, na, nb, nc);
}

std::array<int, 3> fock_occupation(const FockCutoff& cutoff, Eigen::Index index) {
    cutoff.validate();
    if (index < 0 || index >= cutoff.dimension()) {
        throw InvalidConfig("fock_occupation: index out of range");
    }
    if (cutoff.sector_total) {
        return enumerate_sector(*cutoff.sector_total, cutoff.n_max)
            .states[static_cast<std::size_t>(index)];
    }
    const auto k = static_cast<Eigen::Index>(cutoff.n_max + 1);
    return {static_cast<int>(index / (k * k)), static_cast<int>((index / k) % k),
            static_cast<int>(index % k)};
}

int default_cutoff(double mean_photons) {
    if (!std::isfinite(mean_photons) || mean_photons < 0.0) {
        throw InvalidConfig("default_cutoff: mean photon number must be >= 0");
    }
    return static_cast<int>(std::ceil(mean_photons + 8.0 * std::sqrt(mean_photons) + 10.0));
}

double FockStateVector::deficiency() const {
    return 1.0 - amps.squaredNorm();
}

// ---- operators ----

Eigen::SparseMatrix<Complex> build_hamiltonian(const CouplingConfig& config,
                                               const FockCutoff& cutoff) {
    config.validate();
    cutoff.validate();
    if (!config.resonant()) {
        throw NotResonant("build_hamiltonian: time-independent form requires zero detuning");
    }
    const Complex amp_ab = config.lambda * std::exp(kI * config.phi);
    const Complex amp_ac = config.kappa * std::exp(kI * config.theta);
    if (cutoff.sector_total) {
        const auto basis = enumerate_sector(*cutoff.sector_total, cutoff.n_max);
        return assemble_hermitian(static_cast<Eigen::Index>(basis.states.size()),
                                  hop_entries_sector(basis, true),
                                  hop_entries_sector(basis, false), amp_ab, amp_ac);
    }
    return assemble_hermitian(cutoff.dimension(), hop_entries_full(cutoff, true),
                              hop_entries_full(cutoff, false), amp_ab, amp_ac);
}

// ---- evolution ----

FockStateVector evolve_fock(const FockStateVector& psi0, const CouplingConfig& config,
                            double t, double truncation_tol) {
    config.validate();
    psi0.cutoff.validate();
    if (!std::isfinite(t)) {
        throw InvalidConfig("evolve_fock: t must be finite");
    }
    if (psi0.amps.size() != psi0.cutoff.dimension()) {
        throw InvalidConfig("evolve_fock: amplitude vector size mismatch");
    }

    FockStateVector out = psi0;
    const double norm_in = psi0.amps.squaredNorm();

    if (psi0.cutoff.sector_total) {
        const auto basis = enumerate_sector(*psi0.cutoff.sector_total, psi0.cutoff.n_max);
        out.amps = evolve_sector_vector(psi0.amps, basis, config, t);
        for (std::size_t i = 0; i < basis.states.size(); ++i) {
            const auto [na, nb, nc] = basis.states[i];
            out.amps(static_cast<Eigen::Index>(i)) *=
                std::exp(-kI * ((config.omega_a * na + config.omega_b * nb +
                                 config.omega_c * nc) *
                                t));
        }
    } else {
        const int k = psi0.cutoff.n_max;
        for (int total = 0; total <= 3 * k; ++total) {
            const auto basis = enumerate_sector(total, k);
            const auto dim = static_cast<Eigen::Index>(basis.states.size());
            Eigen::VectorXcd component(dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                const auto [na, nb, nc] = basis.states[static_cast<std::size_t>(i)];
                component(i) = psi0.amps(flat_index(k, na, nb, nc));
            }
            if (component.squaredNorm() < 1e-14) {
                continue;  // negligible sectors stay as they were
            }
            component = evolve_sector_vector(component, basis, config, t);
            for (Eigen::Index i = 0; i < dim; ++i) {
                const auto [na, nb, nc] = basis.states[static_cast<std::size_t>(i)];
                out.amps(flat_index(k, na, nb, nc)) =
                    component(i) *
                    std::exp(-kI * ((config.omega_a * na + config.omega_b * nb +
                                     config.omega_c * nc) *
                                    t));
            }
        }
    }

    if (std::abs(out.amps.squaredNorm() - norm_in) > truncation_tol) {
        throw TruncationBreach("evolve_fock: norm drift exceeds the truncation tolerance");
    }
    return out;
}

// ---- conversions and measures ----

FockStateVector branch_to_fock(const BranchState& state, const FockCutoff& cutoff,
                               double truncation_tol) {
    cutoff.validate();
    if (cutoff.sector_total) {
        throw InvalidConfig("branch_to_fock: full space required");
    }
    if (state.modes != 3) {
        throw InvalidConfig("branch_to_fock: three-mode states only");
    }
    if (state.branches.empty()) {
        throw InvalidConfig("branch_to_fock: state has no branches");
    }

    const int k = cutoff.n_max;
    for (const auto& b : state.branches) {
        for (const auto& amp : b.amps) {
            if (poisson_tail(std::norm(amp), k) >= truncation_tol) {
                throw TruncationBreach("branch_to_fock: coherent tail exceeds the cutoff");
            }
        }
    }

    FockStateVector out;
    out.cutoff = cutoff;
    out.amps = Eigen::VectorXcd::Zero(cutoff.dimension());
    std::array<Eigen::VectorXcd, 3> coeffs;
    for (const auto& b : state.branches) {
        for (int m = 0; m < 3; ++m) {
            auto& c = coeffs[static_cast<std::size_t>(m)];
            c.resize(k + 1);
            const Complex alpha = b.amps[static_cast<std::size_t>(m)];
            c(0) = std::exp(Complex(-0.5 * std::norm(alpha), 0.0));
            for (int n = 1; n <= k; ++n) {
                c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
            }
        }
        for (int na = 0; na <= k; ++na) {
            const Complex wa = b.coeff * coeffs[0](na);
            if (wa == Complex(0.0, 0.0)) {
                continue;
            }
            for (int nb = 0; nb <= k; ++nb) {
                const Complex wab = wa * coeffs[1](nb);
                if (wab == Complex(0.0, 0.0)) {
                    continue;
                }
                for (int nc = 0; nc <= k; ++nc) {
                    out.amps(flat_index(k, na, nb, nc)) += wab * coeffs[2](nc);
                }
            }
        }
    }
    return out;
}

double fock_fidelity(const FockStateVector& psi, const FockStateVector& phi) {
    if (psi.cutoff.n_max != phi.cutoff.n_max ||
        psi.cutoff.sector_total != phi.cutoff.sector_total) {
        throw CutoffMismatch("fock_fidelity: cutoffs must match");
    }
    if (psi.amps.size() != phi.amps.size()) {
        throw CutoffMismatch("fock_fidelity: vector sizes must match");
    }
    return std::norm(psi.amps.dot(phi.amps));
}

std::array<double, 3> mean_photon_numbers(const FockStateVector& psi) {
    psi.cutoff.validate();
    const double norm2 = psi.amps.squaredNorm();
    if (norm2 <= 0.0) {
        throw NotNormalized("mean_photon_numbers: zero state");
    }
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    const auto accumulate = [&acc](const std::array<int, 3>& occ, double w) {
        for (int m = 0; m < 3; ++m) {
            acc[static_cast<std::size_t>(m)] += w * occ[static_cast<std::size_t>(m)];
        }
    };
    if (psi.cutoff.sector_total) {
        const auto basis = enumerate_sector(*psi.cutoff.sector_total, psi.cutoff.n_max);
        for (Eigen::Index i = 0; i < psi.amps.size(); ++i) {
            accumulate(basis.states[static_cast<std::size_t>(i)], std::norm(psi.amps(i)));
        }
    } else {
        const auto k = static_cast<Eigen::Index>(psi.cutoff.n_max + 1);
        for (Eigen::Index i = 0; i < psi.amps.size(); ++i) {
            const double w = std::norm(psi.amps(i));
            if (w == 0.0) {
                continue;
            }
            accumulate({static_cast<int>(i / (k * k)), static_cast<int>((i / k) % k),
                        static_cast<int>(i % k)},
                       w);
        }
    }
    for (auto& v : acc) {
        v /= norm2;
    }
    return acc;
}

Eigen::MatrixXcd reduced_density(const FockStateVector& psi, int mode) {
    psi.cutoff.validate();
    if (psi.cutoff.sector_total) {
        throw InvalidConfig("reduced_density: full space required");
    }
    if (mode < 0 || mode > 2) {
        throw InvalidConfig("reduced_density: mode index out of range");
    }
    const int k = psi.cutoff.n_max;
    const auto kk = static_cast<Eigen::Index>(k + 1);
    // Gather psi into a (kept mode) x (traced modes) matrix; rho = M M^+.
    Eigen::MatrixXcd view(kk, kk * kk);
    for (int na = 0; na <= k; ++na) {
        for (int nb = 0; nb <= k; ++nb) {
            for (int nc = 0; nc <= k; ++nc) {
                const Complex value = psi.amps(flat_index(k, na, nb, nc));
                switch (mode) {
                    case 0: view(na, nb * kk + nc) = value; break;
                    case 1: view(nb, na * kk + nc) = value; break;
                    default: view(nc, na * kk + nb) = value; break;
                }
            }
        }
    }
    Eigen::MatrixXcd rho = view * view.adjoint();
    const double trace = rho.trace().real();
    if (trace <= 0.0) {
        throw NotNormalized("reduced_density: zero state");
    }
    rho /= trace;
    return rho;
}

std::vector<double> reduced_spectrum(const FockStateVector& psi, int mode) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(reduced_density(psi, mode));
    std::vector<double> spectrum;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        double p = eig.eigenvalues()(i);
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

}  // namespace trimode
