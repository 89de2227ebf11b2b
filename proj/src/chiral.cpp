#include "wqed/chiral.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include "wqed/spectra1d.hpp"

namespace wqed {

namespace mp = boost::multiprecision;

DirectionalRates directional_rates(double s, double gamma1d)
{
    if (!(s >= -1.0 && s <= 1.0))
        throw DomainError("directional_rates: s must lie in [-1, 1]");
    if (!(gamma1d > 0.0))
        throw DomainError("directional_rates: gamma1d must be positive");
    const double a = std::abs(s);
    const double den = 2.0 * (1.0 + s * s);
    return {gamma1d * (1.0 + a) * (1.0 + a) / den, gamma1d * (1.0 - a) * (1.0 - a) / den};
}

cd chiral_chain_t(std::size_t n, double omega, const Coupling& c)
{
    if (c.gamma_left != 0.0)
        throw DomainError("chiral_chain_t: requires gamma_left = 0");
    const cd t1 = atom_rt(omega, c).t_fwd;
    return std::pow(t1, static_cast<int>(n));
}

double g2_single_chiral(double gamma_nr, double gamma_right)
{
    if (gamma_nr < 0.0 || !(gamma_right > 0.0))
        throw DomainError("g2_single_chiral: rates must be non-negative, gamma_right > 0");
    const double d = gamma_nr - gamma_right;
    if (d == 0.0)
        return divergent;
    const double a = (gamma_nr + gamma_right) * (gamma_nr - 3.0 * gamma_right);
    return a * a / (d * d * d * d);
}

Precision precision_from_env()
{
    const char* v = std::getenv("WQED_PRECISION");
    if (!v)
        return Precision::extended;
    const std::string s(v);
    if (s == "double")
        return Precision::standard;
    if (s == "extended" || s.empty())
        return Precision::extended;
    throw DomainError("WQED_PRECISION must be 'double' or 'extended'");
}

double chiral_n_star(double gamma_nr, double gamma_right)
{
    if (!(gamma_nr > 0.0) || !(gamma_right > 0.0))
        throw DomainError("chiral_n_star: rates must be positive");
    const double r = gamma_nr / gamma_right;
    return r / 8.0 * (3.0 * std::log(2.0) + 2.0 * std::log(r));
}

namespace {

// The generator is
//   M(x) = (1 + 1/r) f(x)^N / D(x),  f = (1 - x)(x - r)/(r + 1 - x),
//   D(x) = 1/2 - (1/2 + r/2 - x)^2 + r^2/2,
// and g2 = (1 + [x^(N-1)] M)^2.

template <class Real>
std::vector<Real> inv_den_series(const Real& r, std::size_t n)
{
    const Real c = (Real(1) + r) / 2;
    const Real d0 = Real(1) / 2 - c * c + r * r / 2;
    const Real d1 = 2 * c;
    const Real d2 = -1;
    std::vector<Real> b(n);
    b[0] = 1 / d0;
    for (std::size_t k = 1; k < n; ++k) {
        Real acc = d1 * b[k - 1];
        if (k >= 2)
            acc += d2 * b[k - 2];
        b[k] = -acc / d0;
    }
    return b;
}

// g = f^alpha as a power series, f0 != 0 (J.C.P. Miller recurrence)
template <class Real>
std::vector<Real> series_pow(const std::vector<Real>& f, double alpha, std::size_t n)
{
    std::vector<Real> g(n);
    g[0] = pow(f[0], Real(alpha));
    for (std::size_t k = 1; k < n; ++k) {
        Real acc = 0;
        for (std::size_t j = 1; j <= k && j < f.size(); ++j)
            acc += (Real(alpha + 1.0) * Real(j) - Real(k)) * f[j] * g[k - j];
        g[k] = acc / (Real(k) * f[0]);
    }
    return g;
}

// (1 - x)/(r + 1 - x)
template <class Real>
std::vector<Real> q_series(const Real& r, std::size_t n)
{
    std::vector<Real> q(n);
    const Real inv = 1 / (r + 1);
    Real p = inv;   // coefficient of x^j in 1/(r+1-x)
    Real prev = 0;
    for (std::size_t j = 0; j < n; ++j) {
        q[j] = p - prev;
        prev = p;
        p *= inv;
    }
    return q;
}

template <class Real>
Real residue_coefficient(const Real& r, std::size_t nat)
{
    const std::size_t n = nat;   // coefficients 0..N-1
    const std::vector<Real> b = inv_den_series(r, n);
    if (r <= 1) {
        // (1 + 1/r)(x - r)^N keeps only powers below N: (r + 1) sum_k C(N,k) x^k (-1)^(N-k) r^(N-k-1)
        const std::vector<Real> qn = series_pow(q_series(r, n), static_cast<double>(nat), n);
        std::vector<Real> hb(n, Real(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j)
                hb[i + j] += qn[i] * b[j];
        Real acc = 0;
        Real binom = 1;   // C(N, k)
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t e = nat - k - 1;
            Real pk = binom * (e == 0 ? Real(1) : pow(r, Real(static_cast<double>(e))));
            if ((nat - k) % 2 == 1)
                pk = -pk;
            acc += pk * hb[n - 1 - k];
            binom = binom * Real(static_cast<double>(nat - k)) / Real(static_cast<double>(k + 1));
        }
        return (r + 1) * acc;
    }
    // f = (1 - x)(x - r) times the series of 1/(r + 1 - x)
    std::vector<Real> inv(n);
    const Real ir = 1 / (r + 1);
    Real p = ir;
    for (std::size_t j = 0; j < n; ++j) {
        inv[j] = p;
        p *= ir;
    }
    const Real a0 = -r, a1 = 1 + r, a2 = -1;   // (1 - x)(x - r)
    std::vector<Real> f(n);
    for (std::size_t j = 0; j < n; ++j) {
        Real v = a0 * inv[j];
        if (j >= 1)
            v += a1 * inv[j - 1];
        if (j >= 2)
            v += a2 * inv[j - 2];
        f[j] = v;
    }
    const std::vector<Real> fn = series_pow(f, static_cast<double>(nat), n);
    Real acc = 0;
    for (std::size_t k = 0; k < n; ++k)
        acc += fn[k] * b[n - 1 - k];
    return (1 + 1 / r) * acc;
}

template <class Real, class Complex>
Real contour_coefficient(const Real& r, std::size_t nat)
{
    const Real c = (Real(1) + r) / 2;
    const Real xm = abs(c - sqrt((Real(1) + r * r) / 2));
    const Real rho = xm < r + 1 ? xm : r + 1;
    const Real rad = rho * Real(0.8);
    const std::size_t m = std::max<std::size_t>(512, 16 * nat);
    const Real twopi = 2 * boost::math::constants::pi<Real>();
    Complex acc(0);
    for (std::size_t j = 0; j < m; ++j) {
        const Real th = twopi * Real(static_cast<double>(j)) / Real(static_cast<double>(m));
        const Complex x = Complex(rad * cos(th), rad * sin(th));
        const Complex den = Real(1) / 2 - (c - x) * (c - x) + r * r / 2;
        Complex val;
        if (r <= 1) {
            // ((x - r)^N - x^N) / r, the x^N part cannot reach the N-1 coefficient
            Complex poly(0);
            Real binom = 1;
            for (std::size_t k = 0; k < nat; ++k) {
                const std::size_t e = nat - k - 1;
                Real pk = binom * (e == 0 ? Real(1) : pow(r, Real(static_cast<double>(e))));
                if ((nat - k) % 2 == 1)
                    pk = -pk;
                poly += pk * pow(x, static_cast<int>(k));
                binom = binom * Real(static_cast<double>(nat - k)) / Real(static_cast<double>(k + 1));
            }
            const Complex q = (Real(1) - x) / (r + 1 - x);
            val = (r + 1) * poly * pow(q, static_cast<int>(nat)) / den;
        } else {
            const Complex f = (Real(1) - x) * (x - r) / (r + 1 - x);
            val = (1 + 1 / r) * pow(f, static_cast<int>(nat)) / den;
        }
        acc += val / pow(x, static_cast<int>(nat) - 1);
    }
    return real(acc) / Real(static_cast<double>(m));
}

template <class Real, class Complex>
double chain_value(const ChiralG2Request& req)
{
    const Real r = Real(req.gamma_nr) / Real(req.gamma_right);
    Real a;
    if (req.method == ChiralMethod::contour)
        a = contour_coefficient<Real, Complex>(r, req.n_atoms);
    else
        a = residue_coefficient<Real>(r, req.n_atoms);
    const Real g = (1 + a) * (1 + a);
    return static_cast<double>(g);
}

double asymptotic(const ChiralG2Request& req)
{
    const double r = req.gamma_nr / req.gamma_right;
    if (!(r > 0.0))
        throw DomainError("asymptotic chiral g2 needs gamma_nr > 0");
    const double v = 1.0 - std::sqrt(2.0) / (2.0 * r) * std::exp(4.0 * static_cast<double>(req.n_atoms) / r);
    return v * v;
}

}  // namespace

double g2_chain_chiral(const ChiralG2Request& req, Precision prec)
{
    if (req.n_atoms < 1)
        throw DomainError("g2_chain_chiral: n_atoms must be >= 1");
    if (req.gamma_nr < 0.0 || !(req.gamma_right > 0.0))
        throw DomainError("g2_chain_chiral: rates must be non-negative, gamma_right > 0");
    if (req.method == ChiralMethod::asymptotic)
        return asymptotic(req);
    if (req.gamma_nr == req.gamma_right)
        return divergent;   // single-photon transmission vanishes on resonance
    double v;
    if (prec == Precision::extended)
        v = chain_value<mp::cpp_bin_float_50, mp::cpp_complex_50>(req);
    else
        v = chain_value<double, std::complex<double>>(req);
    if (!std::isfinite(v)) {
        const double est = req.gamma_nr > 0.0 ? asymptotic(req) : v;
        throw ConvergenceError("chiral residue overflowed; use the asymptotic method", est);
    }
    return v;
}

double g2_chain_chiral(const ChiralG2Request& req)
{
    return g2_chain_chiral(req, precision_from_env());
}

}  // namespace wqed
