#include "wqed/lattice2d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wqed {

void LatticeSpec::validate() const
{
    if (!(spacing_over_lambda > 0.0 && spacing_over_lambda < 1.0))
        throw DomainError("lattice2d: a/lambda0 must lie in (0, 1)");
    if (!(gamma0 > 0.0))
        throw DomainError("lattice2d: gamma0 must be positive");
    if (!(gamma_nr >= 0.0))
        throw DomainError("lattice2d: gamma_nr must be non-negative");
    if (method == LatticeMethod::direct && !(radius >= 5.0))
        throw DomainError("lattice2d: direct radius must be at least 5 lattice constants");
    if (method == LatticeMethod::reciprocal) {
        if (z_sequence.size() < 2)
            throw DomainError("lattice2d: z_sequence needs at least two heights");
        for (double z : z_sequence)
            if (!(z > 0.0 && z < 0.5))
                throw DomainError("lattice2d: z_sequence entries must lie in (0, 0.5)");
    }
}

namespace {

// Neville extrapolation to h2 = 0 of values known at h2[i]
template <class T>
T extrapolate_zero(const std::vector<double>& h2, std::vector<T> v)
{
    const std::size_t n = v.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            v[i] = (h2[i + m] * v[i] - h2[i] * v[i + 1]) / (h2[i + m] - h2[i]);
    return v[0];
}

// Visits reciprocal vectors b = 2 pi (m, n) != 0 with |b| <= bmax, one octant with weights.
template <class F>
void for_each_b(double bmax, F&& f)
{
    const long mmax = static_cast<long>(bmax / (2.0 * pi)) + 1;
    for (long m = 0; m <= mmax; ++m)
        for (long n = 0; n <= m; ++n) {
            if (m == 0 && n == 0)
                continue;
            const double b = 2.0 * pi * std::sqrt(static_cast<double>(m * m + n * n));
            if (b > bmax)
                break;
            int w;
            if (n == 0 || n == m)
                w = 4;
            else
                w = 8;
            f(b, w);
        }
}

// field of the lattice (self term excluded) at height z over the origin
cd reciprocal_at(double k, double z)
{
    long double re = 0.0L;
    for_each_b(std::sqrt(k * k + (40.0 / z) * (40.0 / z)), [&](double b, int w) {
        const double kap = std::sqrt(b * b - k * k);
        re += w * 2.0L * pi * (k * k - b * b / 2.0) * std::exp(-kap * z) / kap;
    });
    const cd ez = std::exp(I * (k * z));
    const cd out = cd(static_cast<double>(re), 0.0) + 2.0 * pi * I * k * ez
                   - ez * (k * k / z + I * k / (z * z) - 1.0 / (z * z * z));
    return out;
}

cd reciprocal_c(double k, const std::vector<double>& zs)
{
    std::vector<double> h2;
    std::vector<cd> v;
    for (double z : zs) {
        h2.push_back(z * z);
        v.push_back(reciprocal_at(k, z));
    }
    return extrapolate_zero(h2, v) + 2.0 * I * k * k * k / 3.0;
}

cd tapered_sum(double k, double taper)
{
    const long lim = static_cast<long>(std::ceil(4.5 * taper));
    cd acc = 0.0;
    for (long m = -lim; m <= lim; ++m) {
        cd row = 0.0;
        for (long n = -lim; n <= lim; ++n) {
            if (m == 0 && n == 0)
                continue;
            const double r2 = static_cast<double>(m * m + n * n);
            const double r = std::sqrt(r2);
            const double x2 = static_cast<double>(m * m) / r2;
            const cd g = std::exp(I * (k * r))
                         * (k * k * (1.0 - x2) / r + (I * k / r2 - 1.0 / (r2 * r)) * (1.0 - 3.0 * x2));
            row += g * std::exp(-r2 / (taper * taper));
        }
        acc += row;
    }
    return acc;
}

cd direct_c(double k, double radius)
{
    const cd c1 = tapered_sum(k, radius / 3.0);
    const cd c2 = tapered_sum(k, 2.0 * radius / 3.0);
    // The evanescent orders leave a 1/T^2 bias in Re C. Im C comes from the radiative order
    // only, whose taper error falls off much faster than 1/T^2, so it is not extrapolated.
    const double corr = (c2.real() - c1.real()) / 3.0;
    const cd c(c2.real() + corr, c2.imag() + 2.0 * k * k * k / 3.0);
    // next-order guess for Re, exact identity for Im
    const double err = std::max(std::abs(corr) / 4.0, std::abs(c.imag() - 2.0 * pi * k)) / std::abs(c);
    if (err > 1e-4)
        throw ConvergenceError("direct lattice sum not converged at radius " + std::to_string(radius) +
                                   " (relative error estimate " + std::to_string(err) + ")",
                               c.real());
    return c;
}

}  // namespace

double lattice_s()
{
    static const double value = [] {
        const std::vector<double> zs{0.2, 0.1, 0.05};
        std::vector<double> h2, v;
        for (double z : zs) {
            long double acc = 0.0L;
            for_each_b(60.0 / z, [&](double b, int w) { acc += w * std::exp(-b * z); });
            h2.push_back(z * z);
            v.push_back(static_cast<double>(2.0L * pi / z * (1.0L + acc)) - 1.0 / (z * z * z));
        }
        return extrapolate_zero(h2, v);
    }();
    return value;
}

double lattice_s_prime()
{
    static const double value = [] {
        const std::vector<double> zs{0.2, 0.1, 0.05};
        std::vector<double> h2, v;
        for (double z : zs) {
            long double acc = 0.0L;
            for_each_b(60.0 / z, [&](double b, int w) { acc += w * std::exp(-b * z) / b; });
            h2.push_back(z * z);
            v.push_back(static_cast<double>(2.0L * pi * acc) - 2.0 * pi * z - 1.0 / z);
        }
        return extrapolate_zero(h2, v);
    }();
    return value;
}

cd interaction_constant(const LatticeSpec& spec, double omega_ratio)
{
    spec.validate();
    if (!(omega_ratio > 0.0))
        throw DomainError("interaction_constant: omega ratio must be positive");
    const double k = 2.0 * pi * spec.spacing_over_lambda * omega_ratio;
    if (k >= 2.0 * pi)
        throw DomainError("interaction_constant: diffraction orders open");
    switch (spec.method) {
    case LatticeMethod::direct:
        return direct_c(k, spec.radius);
    case LatticeMethod::reciprocal:
        return reciprocal_c(k, spec.z_sequence);
    case LatticeMethod::closed_form:
        // small-k expansion; the k^2 term averages (1 + x^2)/2 over the lattice
        return cd(lattice_s() / 2.0 + 0.75 * k * k * lattice_s_prime(), 2.0 * pi * k);
    }
    throw DomainError("interaction_constant: unknown method");
}

CollectiveParams collective_params(const LatticeSpec& spec)
{
    const cd c = interaction_constant(spec);
    const double k = 2.0 * pi * spec.spacing_over_lambda;
    const double pref = 3.0 * spec.gamma0 / (2.0 * k * k * k);
    // Im C carries the single-atom rate through the self term
    return {-pref * c.real(), pref * c.imag()};
}

RT metasurface_rt(const LatticeSpec& spec, double detuning)
{
    const CollectiveParams p = collective_params(spec);
    const cd r = I * p.gamma_2d / (p.lamb_shift - detuning - I * (spec.gamma_nr + p.gamma_2d));
    return {r, 1.0 + r};
}

RT metasurface_rt_polarizability(const LatticeSpec& spec, double detuning)
{
    const cd c = interaction_constant(spec);
    const double k = 2.0 * pi * spec.spacing_over_lambda;
    const double pref = 3.0 * spec.gamma0 / (2.0 * k * k * k);
    // single-atom polarizability with its own radiative damping, lattice sum without self term
    const cd alpha = pref / (-detuning - I * (spec.gamma0 + spec.gamma_nr));
    const cd c_sum = c - 2.0 * I * k * k * k / 3.0;
    const cd r = 2.0 * pi * I * k / (1.0 / alpha - c_sum);
    return {r, 1.0 + r};
}

}  // namespace wqed
