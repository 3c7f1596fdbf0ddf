#include "trimode/network.hpp"

namespace trimode {

NetworkState make_network_input(const ModeSpec& port_a, const ModeSpec& port_b,
                                const ModeSpec& port_c, const Caps& caps) {
    return make_state({port_a, Complex(0.0, 0.0), port_b, port_c}, caps);
}

Eigen::Matrix4cd network_matrix(const std::array<BeamSplitterSpec, 3>& specs) {
    const Complex t1 = specs[0].transmission();
    const Complex r1 = specs[0].reflection();
    const Complex t2 = specs[1].transmission();
    const Complex r2 = specs[1].reflection();
    const Complex t3 = specs[2].transmission();
    const Complex r3 = specs[2].reflection();
    Eigen::Matrix4cd m;
    // a_o and b_o mix the transmitted arm a_t = t1 a + r1 v with input b;
    // a_o' and c_o mix the reflected arm a_r = r1 a + t1 v with input c.
    m << t1 * t2, r1 * t2, r2, 0.0,
         r1 * t3, t1 * t3, 0.0, r3,
         t1 * r2, r1 * r2, t2, 0.0,
         r1 * r3, t1 * r3, 0.0, t3;
    return m;
}

NetworkState apply_network(const NetworkState& input,
                           const std::array<BeamSplitterSpec, 3>& specs) {
    if (input.modes != 4) {
        throw InvalidConfig("apply_network: expected a four-mode state");
    }
    return apply_matrix(input, network_matrix(specs));
}

EntanglementReport conversion_report(const NetworkState& output) {
    if (!output.normalized) {
        throw NotNormalized("conversion_report: state must be normalized");
    }
    if (output.modes != 4) {
        throw InvalidConfig("conversion_report: expected a four-mode state");
    }
    static const std::array<const char*, 4> ports{"a_o", "a_o_prime", "b_o", "c_o"};
    EntanglementReport report;
    for (int m = 0; m < 4; ++m) {
        const auto* name = ports[static_cast<std::size_t>(m)];
        report.purities[name] = marginal_purity(output, m);
        report.entropies_bits[std::string(name) + "|rest"] = cut_entropy(output, {m});
    }
    if (output.branches.size() == 2) {
        for (int m = 0; m < 4; ++m) {
            report.branch_overlaps[ports[static_cast<std::size_t>(m)]] =
                coherent_overlap(output.branches[0].amps[static_cast<std::size_t>(m)],
                                 output.branches[1].amps[static_cast<std::size_t>(m)]);
        }
    }
    // When both a-ports factor out, all entanglement of b_o is with c_o.
    if (report.purities["a_o"] > 1.0 - 1e-8 && report.purities["a_o_prime"] > 1.0 - 1e-8) {
        report.entropies_bits["b_o|c_o"] = report.entropies_bits["b_o|rest"];
    }
    return report;
}

}  // namespace trimode
