// entanglement.hpp: entropy and purity measures over branch states and the
// five-way separability labeling for pure tripartite states.
//
// Classes 3 and 4 of the taxonomy are listed for completeness but cannot be
// produced: a pure global state with exactly two pure marginals does not
// exist, and mixed states are out of scope.  A two-pure-marginal reading
// within tolerance therefore maps to Undetermined.

#pragma once

#include <map>
#include <string>

#include "trimode/branch_state.hpp"

namespace trimode {

enum class SeparabilityClass {
    Class1_FullyInseparable,
    Class2_Biseparable,       // exactly one mode factors out
    Class3_Biseparable,       // unreachable (pure states only)
    Class4_Biseparable,       // unreachable (pure states only)
    Class5_FullySeparable,
    Undetermined,
};

struct ClassLabel {
    SeparabilityClass value = SeparabilityClass::Undetermined;
    int separable_mode = -1;  // set for Class2 only (0=A, 1=B, 2=C)

    // "Class2_Biseparable_A" etc.; used verbatim in CSV output.
    std::string str() const;
};

// Entropy of the reduced state on the cut side, in bits by default.
double cut_entropy(const BranchState& state, const std::vector<int>& cut_modes,
                   bool bits = true);

// Sum of squared reduced eigenvalues of a single mode.
double marginal_purity(const BranchState& state, int mode);

// Labels a normalized pure state from its three marginal purities with
// threshold tol on 1 - purity.
ClassLabel classify_pure(const BranchState& state, double tol = 1e-8);

struct EntanglementReport {
    std::map<std::string, double> entropies_bits;    // "A|BC", "B|AC", "C|AB", "B|C"
    std::map<std::string, double> purities;          // "A", "B", "C"
    std::map<std::string, Complex> branch_overlaps;  // per mode, 2-branch states only
    ClassLabel class_label;
};

// Full report on a three-mode state.  The "B|C" entry appears when mode A
// factors out so that the remaining pair is itself pure.
EntanglementReport analyze(const BranchState& state, double tol = 1e-8);

}  // namespace trimode
