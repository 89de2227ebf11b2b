#include "doctest.h"

#include <random>

#include "wqed/protocols.hpp"

using namespace wqed;

namespace {

HybridState random_state(std::mt19937_64& rng, std::size_t nq)
{
    std::normal_distribution<double> g;
    HybridState s;
    s.n_qubits = nq;
    s.amp = CVector(static_cast<Eigen::Index>(std::size_t{2} << nq));
    for (Eigen::Index i = 0; i < s.amp.size(); ++i)
        s.amp(i) = cd(g(rng), g(rng));
    s.amp.normalize();
    return s;
}

}  // namespace

TEST_CASE("basis conventions")
{
    CHECK(std::abs(ket_plus()(1) - 1.0 / std::sqrt(2.0)) < 1e-16);
    CHECK(std::abs(ket_minus()(0) + 1.0 / std::sqrt(2.0)) < 1e-16);
    CHECK(std::abs(ket_plus().dot(ket_minus())) < 1e-16);
    const HybridState s = HybridState::product({Qubit(1, 0), Qubit(0, 1)}, Channel::up);
    // qubit 0 in |0>, qubit 1 in |1>, photon up: index 0b110
    CHECK(std::abs(s.amp(6) - 1.0) < 1e-16);
    CHECK(s.qubits(Channel::down).norm() == 0.0);
}

TEST_CASE("scattering acts only on the addressed path")
{
    const HybridState s = HybridState::product({ket_plus()}, Channel::down);
    const HybridState a = dimer_scatter(s, 0, Channel::up);
    CHECK((a.amp - s.amp).norm() < 1e-16);
    const HybridState b = dimer_scatter(s, 0, Channel::down);
    // |+> -> -sigma_z|+> = |->
    CHECK(fidelity(b.qubits(Channel::down), ket_minus()) == doctest::Approx(1.0));
}

TEST_CASE("gates are unitary over long sequences")
{
    std::mt19937_64 rng(41);
    HybridState s = random_state(rng, 4);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int k = 0; k < 1000; ++k) {
        const auto q = static_cast<std::size_t>(pick(rng));
        switch (pick(rng)) {
        case 0: s = beamsplitter(s); break;
        case 1: s = dimer_scatter(s, q, k % 2 ? Channel::up : Channel::down); break;
        case 2: s = apply_gate(s, q, hadamard()); break;
        default: s = apply_gate(s, q, pauli_z()); break;
        }
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-12);
}

TEST_CASE("scattering order does not matter")
{
    std::mt19937_64 rng(42);
    const HybridState s = random_state(rng, 3);
    HybridState a = s, b = s;
    for (std::size_t q : {0u, 1u, 2u})
        a = dimer_scatter(a, q);
    for (std::size_t q : {2u, 0u, 1u})
        b = dimer_scatter(b, q);
    CHECK((a.amp - b.amp).norm() < 1e-15);
}

TEST_CASE("GHZ preparation")
{
    for (std::size_t n = 2; n <= 8; ++n)
        for (Channel ch : {Channel::down, Channel::up}) {
            const GhzOutcome g = run_ghz(n, ch);
            CHECK(g.probability == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(fidelity(g.qubits, ghz_target(n, ch)) == doctest::Approx(1.0).epsilon(1e-12));
        }
    // the two heralded states are orthogonal
    CHECK(fidelity(ghz_target(3, Channel::down), ghz_target(3, Channel::up)) < 1e-15);
    CHECK_THROWS_AS(run_ghz(1, Channel::down), DomainError);
    CHECK_THROWS_AS(run_ghz(25, Channel::down), DomainError);
}

TEST_CASE("state transfer")
{
    const Qubit a = run_state_transfer(1.0, 0.0);
    CHECK((a - ket_plus()).norm() < 1e-12);
    const cd cp(0.6, 0.0), cm(0.0, 0.8);
    CHECK((run_state_transfer(cp, cm) - plus_minus(cp, cm)).norm() < 1e-12);
    CHECK_THROWS_AS(run_state_transfer(1.0, 1.0), DomainError);
}

TEST_CASE("projections")
{
    const HybridState s = beamsplitter(HybridState::product({ket_plus()}, Channel::down));
    const Measurement m = project_photon(s, Channel::up);
    CHECK(m.probability == doctest::Approx(0.5));
    CHECK(m.state.norm() == doctest::Approx(1.0));
    const Measurement q = project_qubit(m.state, 0, Qubit(1, 0));
    CHECK(q.probability == doctest::Approx(0.5));
    CHECK_THROWS_AS(project_qubit(s, 0, Qubit(0, 0)), DomainError);
    CHECK_THROWS_AS(apply_gate(s, 3, pauli_z()), DomainError);
    CHECK_THROWS_AS(fidelity(CVector::Ones(2), CVector::Ones(3)), DomainError);
}
