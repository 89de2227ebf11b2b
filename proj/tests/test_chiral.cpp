#include "doctest.h"

#include <cstdlib>

#include "wqed/chiral.hpp"
#include "wqed/spectra1d.hpp"

using namespace wqed;

namespace {

std::size_t crossing(double r)
{
    // first N with g2 >= 1 after the antibunched region
    for (std::size_t n = 2; n < 1000; ++n)
        if (g2_chain_chiral({n, 1.0, r, ChiralMethod::residue}) >= 1.0)
            return n;
    return 0;
}

}  // namespace

TEST_CASE("directional rates")
{
    const DirectionalRates a = directional_rates(0.0, 2.0);
    CHECK(a.gamma_right == doctest::Approx(1.0));
    CHECK(a.gamma_left == doctest::Approx(1.0));
    const DirectionalRates b = directional_rates(1.0, 1.0);
    CHECK(b.gamma_right + b.gamma_left == doctest::Approx(1.0));
    CHECK(b.gamma_left == doctest::Approx(0.0).epsilon(1e-15));
    // depends on |s| only, and xi falls with |s|
    const DirectionalRates m = directional_rates(-0.4, 1.0), p = directional_rates(0.4, 1.0);
    CHECK(m.gamma_right == p.gamma_right);
    CHECK(m.gamma_left == p.gamma_left);
    double prev = 2.0;
    for (double s = 0.0; s <= 1.0; s += 0.1) {
        const DirectionalRates d = directional_rates(s, 1.0);
        CHECK(d.gamma_right + d.gamma_left == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(d.gamma_left / d.gamma_right < prev);
        prev = d.gamma_left / d.gamma_right;
    }
    CHECK_THROWS_AS(directional_rates(1.5, 1.0), DomainError);
}

TEST_CASE("fully chiral chain against transfer matrices")
{
    const Coupling c = Coupling::directional(1.0, 0.0, 0.4);
    for (std::size_t n : {1u, 3u, 10u})
        for (double w : {-1.0, 0.0, 0.6}) {
            const RT rt = chain_rt(AtomChain::periodic(n, 0.0), c, w);
            CHECK(std::abs(rt.r) < 1e-15);
            CHECK(std::abs(chiral_chain_t(n, w, c) - rt.t) < 1e-12);
        }
    CHECK_THROWS_AS(chiral_chain_t(2, 0.0, Coupling::symmetric_rates(1.0)), DomainError);
}

TEST_CASE("one atom")
{
    for (double r : {0.1, 0.5, 2.0, 7.0}) {
        const double want = g2_single_chiral(r, 1.0);
        for (ChiralMethod m : {ChiralMethod::residue, ChiralMethod::contour})
            CHECK(g2_chain_chiral({1, 1.0, r, m}) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(std::isinf(g2_single_chiral(1.0, 1.0)));
}

TEST_CASE("crossing follows the threshold estimate")
{
    for (double r : {20.0, 50.0, 130.0}) {
        const double ns = chiral_n_star(r, 1.0);
        const std::size_t nc = crossing(r);
        REQUIRE(nc > 0);
        CHECK(std::abs(static_cast<double>(nc) - ns) <= std::max(1.0, 0.05 * ns));
    }
}

TEST_CASE("asymptotic form in its regime")
{
    for (double r : {50.0, 130.0}) {
        const double ns = chiral_n_star(r, 1.0);
        for (double f : {0.3, 0.7, 1.2}) {
            const auto n = static_cast<std::size_t>(f * ns);
            const double exact = g2_chain_chiral({n, 1.0, r, ChiralMethod::residue});
            const double asym = g2_chain_chiral({n, 1.0, r, ChiralMethod::asymptotic});
            CHECK(std::abs(asym - exact) <= 0.1 * exact);
        }
    }
    CHECK_THROWS_AS(g2_chain_chiral({5, 1.0, 0.0, ChiralMethod::asymptotic}), DomainError);
}

TEST_CASE("residue and contour agree")
{
    for (double r : {0.5, 3.0, 40.0})
        for (std::size_t n : {2u, 9u, 30u}) {
            const double a = g2_chain_chiral({n, 1.0, r, ChiralMethod::residue});
            const double b = g2_chain_chiral({n, 1.0, r, ChiralMethod::contour});
            CHECK(a == doctest::Approx(b).epsilon(1e-8));
        }
}

TEST_CASE("double and extended precision agree where double is safe")
{
    for (std::size_t n : {3u, 20u}) {
        const ChiralG2Request q{n, 1.0, 5.0, ChiralMethod::residue};
        CHECK(g2_chain_chiral(q, Precision::standard) ==
              doctest::Approx(g2_chain_chiral(q, Precision::extended)).epsilon(1e-9));
    }
}

TEST_CASE("precision switch from the environment")
{
    ::setenv("WQED_PRECISION", "double", 1);
    CHECK(precision_from_env() == Precision::standard);
    ::setenv("WQED_PRECISION", "extended", 1);
    CHECK(precision_from_env() == Precision::extended);
    ::setenv("WQED_PRECISION", "quad", 1);
    CHECK_THROWS_AS(precision_from_env(), DomainError);
    ::unsetenv("WQED_PRECISION");
    CHECK(precision_from_env() == Precision::extended);
}

TEST_CASE("input validation")
{
    CHECK_THROWS_AS(g2_chain_chiral({0, 1.0, 1.0, ChiralMethod::residue}), DomainError);
    CHECK_THROWS_AS(g2_chain_chiral({3, 0.0, 1.0, ChiralMethod::residue}), DomainError);
    CHECK_THROWS_AS(chiral_n_star(0.0, 1.0), DomainError);
}
