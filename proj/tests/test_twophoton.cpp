#include "doctest.h"

#include <random>

#include "wqed/twophoton.hpp"

using namespace wqed;

namespace {

// Sigma from the full N^2 x N^2 two-excitation resolvent
CMatrix sigma_brute(const CMatrix& h, cd eps)
{
    const Eigen::Index n = h.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix big = CMatrix::Zero(n * n, n * n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            for (Eigen::Index c = 0; c < n; ++c)
                for (Eigen::Index d = 0; d < n; ++d)
                    big(a * n + b, c * n + d) = h(a, c) * id(b, d) + id(a, c) * h(b, d);
    big -= 2.0 * eps * CMatrix::Identity(n * n, n * n);
    const CMatrix inv = big.inverse();
    CMatrix s(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k)
            s(m, k) = I * inv(m * n + m, k * n + k);
    return s;
}

}  // namespace

TEST_CASE("Dicke kernel symmetries")
{
    const Coupling c = Coupling::symmetric_rates(0.8, 0.1);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        const double w1 = u(rng), w2 = u(rng), w1p = u(rng), w2p = w1 + w2 - w1p;
        const cd m = kernel_dicke(w1p, w2p, w1, w2, 3, c);
        CHECK(std::abs(m - kernel_dicke(w2p, w1p, w1, w2, 3, c)) < 1e-12 * (1 + std::abs(m)));
        CHECK(std::abs(m - kernel_dicke(w1p, w2p, w2, w1, 3, c)) < 1e-12 * (1 + std::abs(m)));
        // time reversal: in and out pairs exchanged
        CHECK(std::abs(m - kernel_dicke(w1, w2, w1p, w2p, 3, c)) < 1e-12 * (1 + std::abs(m)));
    }
    CHECK_THROWS_AS(kernel_dicke(0.0, 0.0, 0.0, 0.0, 0, c), DomainError);
}

TEST_CASE("Bethe solution matches the diagrammatic kernel")
{
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 30; ++k) {
        const std::size_t n = 1 + k % 4;
        const Coupling c = Coupling::symmetric_rates(0.6);
        const double w1 = u(rng), w2 = u(rng), w1p = u(rng), w2p = w1 + w2 - w1p;
        const cd a = kernel_dicke(w1p, w2p, w1, w2, n, c);
        const cd b = bethe_oracle(w1p, w2p, w1, w2, n, c.gamma1d);
        CHECK(std::abs(a - b) < 1e-10 * (1 + std::abs(a)));
    }
}

TEST_CASE("coherent corrections close the flux")
{
    const Coupling c = Coupling::symmetric_rates(1.0);
    for (std::size_t n : {1u, 2u, 4u})
        for (double eps : {-2.0, 0.0, 0.7}) {
            const CoherentCorrections cc = coherent_corrections(eps, 0.1, n, c);
            CHECK(cc.R_coh + cc.T_coh + cc.I_incoh == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(cc.I_incoh == doctest::Approx(incoherent_rate_numeric(eps, 0.1, n, c)).epsilon(1e-6));
        }
}

TEST_CASE("Sigma from the pair resolvent")
{
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    for (std::size_t n = 2; n <= 5; ++n) {
        AtomChain ch;
        for (std::size_t i = 0; i < n; ++i)
            ch.phases.push_back(u(rng));
        std::sort(ch.phases.begin(), ch.phases.end());
        const CMatrix h = effective_hamiltonian(ch, Coupling::symmetric_rates(1.0, 0.2));
        const cd eps(0.37, 0.0);
        CHECK((sigma_pair(h, eps) - sigma_brute(h, eps)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("Sigma is singular at the hard-core pair energies")
{
    for (std::size_t n = 2; n <= 6; ++n) {
        const CMatrix h = effective_hamiltonian(AtomChain::periodic(n, 0.9), Coupling::symmetric_rates(1.0));
        const auto states = pair_eigenstates(h, false);
        for (const PairState& ps : states) {
            // either detected as a pole or numerically rank deficient
            try {
                const CMatrix s = sigma_pair(h, ps.energy);
                Eigen::JacobiSVD<CMatrix> svd(s);
                const auto sv = svd.singularValues();
                CHECK(sv(sv.size() - 1) / sv(0) < 1e-8);
            } catch (const SingularError&) {
            }
        }
    }
}

TEST_CASE("pair eigenstates solve the hard-core equation")
{
    const Eigen::Index n = 7;
    const CMatrix h = effective_hamiltonian(AtomChain::periodic(7, 0.5), Coupling::symmetric_rates(1.0, 0.05));
    const auto states = pair_eigenstates(h, true);
    CHECK(states.size() == 21);
    for (std::size_t j = 0; j < states.size(); ++j) {
        const CMatrix& p = states[j].amplitude;
        CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(p.diagonal().cwiseAbs().maxCoeff() == 0.0);
        const CMatrix res = h * p + p * h.transpose() - 2.0 * states[j].energy * p;
        double worst = 0.0;
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                if (a != b)
                    worst = std::max(worst, std::abs(res(a, b)));
        CHECK(worst < 1e-10 * (1 + p.cwiseAbs().maxCoeff()));
        if (j > 0)
            CHECK(states[j - 1].energy.imag() <= states[j].energy.imag() + 1e-14);
    }
    CHECK_THROWS_AS(pair_eigenstates(CMatrix::Zero(1, 1)), DomainError);
}

TEST_CASE("equal-time correlations")
{
    // one atom reflects single photons only
    CHECK(g2_zero_resonant(1, 1.0, 0.2, Geometry::reflect) == 0.0);
    CHECK(std::isinf(g2_zero_resonant(1, 1.0, 0.0, Geometry::transmit)));
    for (std::size_t n : {1u, 2u, 3u})
        for (Geometry geo : {Geometry::transmit, Geometry::reflect}) {
            const Coupling c = Coupling::symmetric_rates(1.0, 0.5);
            const double a = g2_tau_dicke(0.0, 0.0, geo, n, c);
            CHECK(a == doctest::Approx(g2_zero_resonant(n, 1.0, 0.5, geo)).epsilon(1e-10));
        }
}

TEST_CASE("correlations decay to one")
{
    const Coupling c = Coupling::symmetric_rates(1.0, 0.2);
    for (double eps : {0.0, 0.8})
        for (Geometry geo : {Geometry::transmit, Geometry::reflect}) {
            CHECK(g2_tau_dicke(eps, 20.0, geo, 3, c) == doctest::Approx(1.0).epsilon(1e-3));
            CHECK(g2_tau(eps, 20.0, geo, AtomChain::periodic(2, pi / 2), c) == doctest::Approx(1.0).epsilon(1e-3));
        }
}

TEST_CASE("general kernel reduces to Dicke at zero spacing")
{
    const Coupling c = Coupling::symmetric_rates(1.0, 0.1);
    const double eps = 0.3;
    for (double w : {-1.0, 0.2, 2.0}) {
        const cd d = kernel_dicke(w, eps, 3, c);
        const cd g = kernel_general(AtomChain::periodic(3, 0.0), c, eps, eps - w, 1, 1);
        CHECK(std::abs(d - g) < 1e-9 * (1 + std::abs(d)));
    }
}

TEST_CASE("general kernel is continuous in the spacing")
{
    const Coupling c = Coupling::symmetric_rates(1.0, 0.1);
    const double eps = 0.3, w = 0.5;
    const cd d = kernel_dicke(w, eps, 3, c);
    double prev = 1e300;
    for (double phi : {1e-2, 1e-3, 1e-4}) {
        const double dev = std::abs(kernel_general(AtomChain::periodic(3, phi), c, eps, eps - w, 1, 1) - d);
        CHECK(dev < prev);
        CHECK(dev < 100.0 * phi);
        prev = dev;
    }
}

TEST_CASE("g2 by residues and by quadrature agree")
{
    const Coupling c = Coupling::symmetric_rates(1.0, 0.3);
    const AtomChain ch{{0.0, 0.8, 2.1}};
    for (double tau : {0.0, 0.4, 2.0})
        for (Geometry geo : {Geometry::transmit, Geometry::reflect}) {
            const double a = g2_tau(0.2, tau, geo, ch, c, G2Method::residue);
            const double b = g2_tau(0.2, tau, geo, ch, c, G2Method::quadrature);
            CHECK(a == doctest::Approx(b).epsilon(1e-6));
        }
}

TEST_CASE("kernel rejects the non-Markovian Hamiltonian")
{
    Coupling c = Coupling::symmetric_rates(1.0);
    c.markovian = false;
    c.gamma_over_omega0 = 1e-3;
    CHECK_THROWS_AS(PairKernel(AtomChain::periodic(2, 1.0), c, 0.0), DomainError);
    CHECK_THROWS_AS(kernel_general(AtomChain::periodic(2, 1.0), Coupling::symmetric_rates(1.0), 0.0, 0.0, 2, 1),
                    DomainError);
}

TEST_CASE("q matrix")
{
    const CMatrix h = effective_hamiltonian(AtomChain::periodic(3, 0.7), Coupling::symmetric_rates(1.0, 0.1));
    const CMatrix s = sigma_pair(h, 0.2);
    const CMatrix qi = q_matrix(s, divergent);
    CHECK((qi * s - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    // large finite U approaches the hard-core limit
    CHECK((q_matrix(s, 1e9) - qi).cwiseAbs().maxCoeff() < 1e-6 * qi.cwiseAbs().maxCoeff());
}
