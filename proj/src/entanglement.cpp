#include "trimode/entanglement.hpp"

#include <array>
#include <cmath>

namespace trimode {

std::string ClassLabel::str() const {
    switch (value) {
        case SeparabilityClass::Class1_FullyInseparable:
            return "Class1_FullyInseparable";
        case SeparabilityClass::Class2_Biseparable: {
            static const std::array<const char*, 3> names{"A", "B", "C"};
            if (separable_mode < 0 || separable_mode > 2) {
                return "Class2_Biseparable";
            }
            return std::string("Class2_Biseparable_") +
                   names[static_cast<std::size_t>(separable_mode)];
        }
        case SeparabilityClass::Class3_Biseparable:
            return "Class3_Biseparable";
        case SeparabilityClass::Class4_Biseparable:
            return "Class4_Biseparable";
        case SeparabilityClass::Class5_FullySeparable:
            return "Class5_FullySeparable";
        case SeparabilityClass::Undetermined:
            break;
    }
    return "Undetermined";
}

double cut_entropy(const BranchState& state, const std::vector<int>& cut_modes, bool bits) {
    const auto spectrum = reduced_spectrum(state, cut_modes);
    double s = 0.0;
    for (double p : spectrum) {
        if (p > 0.0) {
            s -= p * std::log(p);
        }
    }
    return bits ? s / std::log(2.0) : s;
}

double marginal_purity(const BranchState& state, int mode) {
    const auto spectrum = reduced_spectrum(state, {mode});
    double purity = 0.0;
    for (double p : spectrum) {
        purity += p * p;
    }
    return purity;
}

ClassLabel classify_pure(const BranchState& state, double tol) {
    if (!state.normalized) {
        throw NotNormalized("classify_pure: state must be normalized");
    }
    if (state.modes != 3) {
        throw InvalidConfig("classify_pure: three-mode states only");
    }
    std::array<bool, 3> pure{};
    int pure_count = 0;
    for (int m = 0; m < 3; ++m) {
        pure[static_cast<std::size_t>(m)] = marginal_purity(state, m) > 1.0 - tol;
        if (pure[static_cast<std::size_t>(m)]) {
            ++pure_count;
        }
    }
    ClassLabel label;
    switch (pure_count) {
        case 3:
            label.value = SeparabilityClass::Class5_FullySeparable;
            break;
        case 1:
            label.value = SeparabilityClass::Class2_Biseparable;
            for (int m = 0; m < 3; ++m) {
                if (pure[static_cast<std::size_t>(m)]) {
                    label.separable_mode = m;
                }
            }
            break;
        case 0:
            label.value = SeparabilityClass::Class1_FullyInseparable;
            break;
        default:
            label.value = SeparabilityClass::Undetermined;
            break;
    }
    return label;
}

EntanglementReport analyze(const BranchState& state, double tol) {
    EntanglementReport report;
    report.entropies_bits["A|BC"] = cut_entropy(state, {0});
    report.entropies_bits["B|AC"] = cut_entropy(state, {1});
    report.entropies_bits["C|AB"] = cut_entropy(state, {2});
    report.purities["A"] = marginal_purity(state, 0);
    report.purities["B"] = marginal_purity(state, 1);
    report.purities["C"] = marginal_purity(state, 2);
    if (state.branches.size() == 2) {
        static const std::array<const char*, 3> names{"A", "B", "C"};
        for (int m = 0; m < 3; ++m) {
            report.branch_overlaps[names[static_cast<std::size_t>(m)]] =
                coherent_overlap(state.branches[0].amps[static_cast<std::size_t>(m)],
                                 state.branches[1].amps[static_cast<std::size_t>(m)]);
        }
    }
    report.class_label = classify_pure(state, tol);
    if (const auto rest = factor_out_mode(state, 0)) {
        report.entropies_bits["B|C"] = cut_entropy(*rest, {0});
    }
    return report;
}

}  // namespace trimode
