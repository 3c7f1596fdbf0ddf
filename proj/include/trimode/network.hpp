// network.hpp: three-beam-splitter network converting a cat resource in port a
// into pair entanglement between the b and c output ports.
//
// Input modes are ordered {a, v, b, c} with v a vacuum ancilla; outputs are
// {a_o, a_o', b_o, c_o}.  Beam splitter 1 splits a against v, beam splitters
// 2 and 3 mix the two arms with b and c.  The whole network is a single 4x4
// unitary on branch amplitudes.

#pragma once

#include <array>

#include "trimode/branch_state.hpp"
#include "trimode/entanglement.hpp"

namespace trimode {

struct BeamSplitterSpec {
    double varphi = 0.0;  // mixing angle (rad)

    Complex transmission() const { return Complex(std::cos(varphi), 0.0); }
    Complex reflection() const { return Complex(0.0, std::sin(varphi)); }
};

// A branch state with mode arity 4.
using NetworkState = BranchState;

// Builds the input state {a, v, b, c} with the vacuum ancilla inserted.
NetworkState make_network_input(const ModeSpec& port_a, const ModeSpec& port_b,
                                const ModeSpec& port_c, const Caps& caps = {});

// Composed map from input amplitudes (a, v, b, c) to output amplitudes
// (a_o, a_o', b_o, c_o).  Unitary for every angle triple.
Eigen::Matrix4cd network_matrix(const std::array<BeamSplitterSpec, 3>& specs);

// Routes every branch through the network.  Norms are preserved.
NetworkState apply_network(const NetworkState& input,
                           const std::array<BeamSplitterSpec, 3>& specs);

// Marginal purities of all four output ports plus per-port cut entropies.
// The "b_o|c_o" entry appears when both a-ports are pure, i.e. when the
// remaining pair carries all the entanglement.
EntanglementReport conversion_report(const NetworkState& output);

}  // namespace trimode
