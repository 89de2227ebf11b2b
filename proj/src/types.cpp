#include "wqed/types.hpp"

#include <cmath>

namespace wqed {

void AtomChain::validate() const
{
    if (phases.empty())
        throw DomainError("chain must contain at least one atom");
    for (std::size_t i = 1; i < phases.size(); ++i)
        if (phases[i] < phases[i - 1])
            throw DomainError("chain phases must be non-decreasing");
}

AtomChain AtomChain::periodic(std::size_t n, double phi)
{
    AtomChain c;
    c.phases.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        c.phases[i] = phi * static_cast<double>(i);
    return c;
}

void Coupling::validate() const
{
    if (!(gamma1d > 0.0))
        throw DomainError("gamma1d must be positive");
    if (gamma_nr < 0.0 || gamma_right < 0.0 || gamma_left < 0.0)
        throw DomainError("rates must be non-negative");
    if (std::abs(gamma_right + gamma_left - gamma1d) > 1e-12 * std::max(1.0, gamma1d))
        throw DomainError("gamma_right + gamma_left must equal gamma1d");
    if (!markovian && !(gamma_over_omega0 > 0.0))
        throw DomainError("non-Markovian coupling needs gamma_over_omega0 > 0");
}

Coupling Coupling::symmetric_rates(double gamma1d, double gamma_nr)
{
    Coupling c;
    c.gamma1d = gamma1d;
    c.gamma_nr = gamma_nr;
    c.gamma_right = c.gamma_left = 0.5 * gamma1d;
    return c;
}

Coupling Coupling::directional(double gamma_right, double gamma_left, double gamma_nr)
{
    Coupling c;
    c.gamma1d = gamma_right + gamma_left;
    c.gamma_right = gamma_right;
    c.gamma_left = gamma_left;
    c.gamma_nr = gamma_nr;
    return c;
}

}  // namespace wqed
