#include "wqed/protocols.hpp"

#include <cmath>
#include <string>

namespace wqed {

namespace {

void check_qubit(const HybridState& s, std::size_t q)
{
    if (q >= s.n_qubits)
        throw DomainError("qubit index " + std::to_string(q) + " out of range");
}

std::size_t photon_bit(const HybridState& s) { return std::size_t{1} << s.n_qubits; }

}  // namespace

CVector HybridState::qubits(Channel ch) const
{
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t off = ch == Channel::up ? dim : 0;
    return amp.segment(static_cast<Eigen::Index>(off), static_cast<Eigen::Index>(dim));
}

HybridState HybridState::product(const std::vector<Qubit>& qubits, Channel photon)
{
    if (qubits.empty() || qubits.size() > max_protocol_qubits)
        throw DomainError("HybridState: between 1 and 24 qubits supported");
    HybridState s;
    s.n_qubits = qubits.size();
    CVector reg = CVector::Ones(1);
    // qubit j ends up as bit j, so later qubits are the slow index
    for (const Qubit& q : qubits) {
        const Qubit u = q.normalized();
        CVector next(reg.size() * 2);
        next.head(reg.size()) = reg * u(0);
        next.tail(reg.size()) = reg * u(1);
        reg = std::move(next);
    }
    s.amp = CVector::Zero(reg.size() * 2);
    if (photon == Channel::up)
        s.amp.tail(reg.size()) = reg;
    else
        s.amp.head(reg.size()) = reg;
    return s;
}

Qubit ket_plus() { return Qubit(1.0, 1.0) / std::sqrt(2.0); }
Qubit ket_minus() { return Qubit(-1.0, 1.0) / std::sqrt(2.0); }
Qubit plus_minus(cd c_plus, cd c_minus) { return c_plus * ket_plus() + c_minus * ket_minus(); }

Gate2 pauli_z()
{
    Gate2 g;
    g << 1.0, 0.0, 0.0, -1.0;
    return g;
}

Gate2 hadamard()
{
    Gate2 g;
    g << 1.0, 1.0, 1.0, -1.0;
    return g / std::sqrt(2.0);
}

HybridState dimer_scatter(const HybridState& s, std::size_t qubit, Channel path)
{
    check_qubit(s, qubit);
    HybridState out = s;
    const std::size_t pb = photon_bit(s);
    const std::size_t qb = std::size_t{1} << qubit;
    const bool up = path == Channel::up;
    for (std::size_t i = 0; i < static_cast<std::size_t>(s.amp.size()); ++i) {
        if (((i & pb) != 0) != up)
            continue;
        // -sigma_z: |1> keeps its sign, |0> flips
        if (!(i & qb))
            out.amp(static_cast<Eigen::Index>(i)) = -out.amp(static_cast<Eigen::Index>(i));
    }
    return out;
}

HybridState beamsplitter(const HybridState& s)
{
    HybridState out = s;
    const auto half = s.amp.size() / 2;
    const double h = 1.0 / std::sqrt(2.0);
    out.amp.head(half) = h * (s.amp.head(half) + s.amp.tail(half));
    out.amp.tail(half) = h * (s.amp.head(half) - s.amp.tail(half));
    return out;
}

HybridState apply_gate(const HybridState& s, std::size_t qubit, const Gate2& g)
{
    check_qubit(s, qubit);
    HybridState out = s;
    const std::size_t qb = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < static_cast<std::size_t>(s.amp.size()); ++i) {
        if (i & qb)
            continue;
        const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | qb);
        const cd a0 = s.amp(i0), a1 = s.amp(i1);
        out.amp(i0) = g(0, 0) * a0 + g(0, 1) * a1;
        out.amp(i1) = g(1, 0) * a0 + g(1, 1) * a1;
    }
    return out;
}

namespace {

Measurement renormalize(HybridState s)
{
    const double p = s.amp.squaredNorm();
    if (p > 0.0)
        s.amp /= std::sqrt(p);
    return {std::move(s), p};
}

}  // namespace

Measurement project_photon(const HybridState& s, Channel ch)
{
    HybridState out = s;
    const auto half = s.amp.size() / 2;
    if (ch == Channel::up)
        out.amp.head(half).setZero();
    else
        out.amp.tail(half).setZero();
    return renormalize(std::move(out));
}

Measurement project_qubit(const HybridState& s, std::size_t qubit, const Qubit& target)
{
    check_qubit(s, qubit);
    if (!(target.norm() > 0.0))
        throw DomainError("project_qubit: zero target state");
    const Qubit t = target.normalized();
    HybridState out = s;
    const std::size_t qb = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < static_cast<std::size_t>(s.amp.size()); ++i) {
        if (i & qb)
            continue;
        const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | qb);
        const cd overlap = std::conj(t(0)) * s.amp(i0) + std::conj(t(1)) * s.amp(i1);
        out.amp(i0) = t(0) * overlap;
        out.amp(i1) = t(1) * overlap;
    }
    return renormalize(std::move(out));
}

GhzOutcome run_ghz(std::size_t n_qubits, Channel measured)
{
    if (n_qubits < 2 || n_qubits > max_protocol_qubits)
        throw DomainError("run_ghz: n_qubits must lie in [2, 24]");
    HybridState s = HybridState::product(std::vector<Qubit>(n_qubits, ket_plus()), Channel::down);
    s = beamsplitter(s);
    for (std::size_t q = 0; q < n_qubits; ++q)
        s = dimer_scatter(s, q, Channel::up);
    s = beamsplitter(s);
    const Measurement m = project_photon(s, measured);
    return {m.state.qubits(measured), m.probability};
}

CVector ghz_target(std::size_t n_qubits, Channel ch)
{
    if (n_qubits < 1 || n_qubits > max_protocol_qubits)
        throw DomainError("ghz_target: n_qubits must lie in [1, 24]");
    CVector plus = CVector::Ones(1), minus = CVector::Ones(1);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        CVector p2(plus.size() * 2), m2(minus.size() * 2);
        p2 << plus * ket_plus()(0), plus * ket_plus()(1);
        m2 << minus * ket_minus()(0), minus * ket_minus()(1);
        plus = std::move(p2);
        minus = std::move(m2);
    }
    const double sign = ch == Channel::down ? 1.0 : -1.0;
    return (plus + sign * minus) / std::sqrt(2.0);
}

Qubit run_state_transfer(cd c_plus, cd c_minus)
{
    const double n2 = std::norm(c_plus) + std::norm(c_minus);
    if (std::abs(n2 - 1.0) > 1e-12)
        throw DomainError("run_state_transfer: |c+|^2 + |c-|^2 must equal 1");
    HybridState s = HybridState::product({plus_minus(c_plus, c_minus), ket_plus()}, Channel::down);
    s = beamsplitter(s);
    s = dimer_scatter(s, 0, Channel::up);
    s = beamsplitter(s);
    s = dimer_scatter(s, 1, Channel::down);
    s = beamsplitter(s);
    // heralded branch: photon in d, qubit 0 found in |-> after sigma_z
    s = project_photon(s, Channel::down).state;
    s = apply_gate(s, 0, pauli_z());
    s = project_qubit(s, 0, ket_minus()).state;
    s = apply_gate(s, 1, hadamard());
    s = apply_gate(s, 1, pauli_z());
    // qubit 0 is now |->; read qubit 1 off the down-channel block
    const CVector reg = s.qubits(Channel::down);
    const Qubit km = ket_minus();
    Qubit out;
    out(0) = std::conj(km(0)) * reg(0) + std::conj(km(1)) * reg(1);
    out(1) = std::conj(km(0)) * reg(2) + std::conj(km(1)) * reg(3);
    // the circuit leaves a global -1
    return -out;
}

double fidelity(const CVector& a, const CVector& b)
{
    if (a.size() != b.size())
        throw DomainError("fidelity: dimension mismatch");
    const double na = a.squaredNorm(), nb = b.squaredNorm();
    if (!(na > 0.0) || !(nb > 0.0))
        throw DomainError("fidelity: zero vector");
    return std::norm(a.dot(b)) / (na * nb);
}

}  // namespace wqed
