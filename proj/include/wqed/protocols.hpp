#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "wqed/modes.hpp"
#include "wqed/types.hpp"

namespace wqed {

enum class Channel { down, up };

using Gate2 = Eigen::Matrix2cd;
using Qubit = Eigen::Vector2cd;   // amplitudes on |0>, |1>

// Stationary qubits plus one photon in one of two waveguides.
// Amplitude index: bit j is qubit j, bit n is the photon (0 = down, 1 = up).
struct HybridState {
    std::size_t n_qubits = 0;
    CVector amp;

    double norm() const { return amp.norm(); }
    // qubit amplitudes for the photon in channel ch (not renormalized)
    CVector qubits(Channel ch) const;

    static HybridState product(const std::vector<Qubit>& qubits, Channel photon);
};

inline constexpr std::size_t max_protocol_qubits = 24;

// |+-> = (|1> +- |0>)/sqrt2
Qubit ket_plus();
Qubit ket_minus();
Qubit plus_minus(cd c_plus, cd c_minus);

Gate2 pauli_z();
// |0> -> (|0> + |1>)/sqrt2, |1> -> (|0> - |1>)/sqrt2
Gate2 hadamard();

// photon passing the dimer of qubit q in channel path picks up -sigma_z of that qubit
HybridState dimer_scatter(const HybridState& s, std::size_t qubit, Channel path = Channel::up);
// Hadamard on the photon: d -> (d + u)/sqrt2, u -> (d - u)/sqrt2
HybridState beamsplitter(const HybridState& s);
HybridState apply_gate(const HybridState& s, std::size_t qubit, const Gate2& g);

struct Measurement {
    HybridState state;   // renormalized; zero vector when probability is 0
    double probability;
};

Measurement project_photon(const HybridState& s, Channel ch);
// projects qubit q on |target>, which is normalized internally
Measurement project_qubit(const HybridState& s, std::size_t qubit, const Qubit& target);

struct GhzOutcome {
    CVector qubits;   // 2^n amplitudes
    double probability;
};

GhzOutcome run_ghz(std::size_t n_qubits, Channel measured);
// (|+...+> + sign |-...->)/sqrt2 with the sign this circuit produces for channel ch
CVector ghz_target(std::size_t n_qubits, Channel ch);

// Moves c+|+> + c-|-> from qubit 0 to qubit 1; returns qubit 1 in the |0>,|1> basis.
Qubit run_state_transfer(cd c_plus, cd c_minus);

double fidelity(const CVector& a, const CVector& b);

}  // namespace wqed
