#include "wqed/modes.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numeric>

namespace wqed {

bool ModeSet::any_degenerate() const
{
    return std::any_of(near_degenerate.begin(), near_degenerate.end(), [](bool b) { return b; });
}

double photon_scale(const Coupling& c, double delta)
{
    if (c.markovian)
        return 1.0;
    return 1.0 + delta * c.gamma_over_omega0 / c.gamma1d;
}

cd photon_scale(const Coupling& c, cd delta)
{
    if (c.markovian)
        return 1.0;
    return 1.0 + delta * c.gamma_over_omega0 / c.gamma1d;
}

CMatrix effective_hamiltonian(const AtomChain& chain, const Coupling& c, std::optional<cd> omega)
{
    chain.validate();
    c.validate();
    if (!c.markovian && !omega)
        throw DomainError("non-Markovian Hamiltonian needs a frequency");

    const cd scale = c.markovian ? cd(1.0) : photon_scale(c, *omega);
    const auto n = static_cast<Eigen::Index>(chain.size());
    CMatrix h(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (m == k) {
                h(m, k) = -I * (c.gamma_right + c.gamma_left + c.gamma_nr);
                continue;
            }
            const double dz = std::abs(chain.phases[m] - chain.phases[k]);
            const cd ph = std::exp(I * scale * dz);
            // row index after column index: emission travelling to the right
            const double g = m > k ? c.gamma_right : c.gamma_left;
            h(m, k) = -2.0 * I * g * ph;
        }
    }
    return h;
}

ModeSet eigenmodes(const CMatrix& h)
{
    if (h.rows() != h.cols())
        throw DomainError("eigenmodes: matrix must be square");
    const Eigen::Index n = h.rows();
    Eigen::ComplexEigenSolver<CMatrix> es(h, true);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("eigenmodes: eigensolver failed", 0.0);

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ev(a).imag() < ev(b).imag(); });

    ModeSet ms;
    ms.eigenvalues.resize(n);
    ms.eigenvectors.resize(n, n);
    ms.near_degenerate.assign(n, false);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < n; ++j) {
        ms.eigenvalues(j) = ev(order[j]);
        CVector v = es.eigenvectors().col(order[j]);
        const cd s = (v.transpose() * v)(0, 0);
        if (std::abs(s) > 1e-14)
            v /= std::sqrt(s);
        else
            ms.near_degenerate[j] = true;
        ms.eigenvectors.col(j) = v;
    }
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b)
            if (std::abs(ms.eigenvalues(a) - ms.eigenvalues(b)) < 1e-10 * scale)
                ms.near_degenerate[a] = ms.near_degenerate[b] = true;

    // dominant Bloch wavevector from a zero-padded DFT over the site index
    const Eigen::Index m = std::max<Eigen::Index>(64, 8 * n);
    CMatrix ft(m, n);
    for (Eigen::Index q = 0; q < m; ++q) {
        const double k = -pi + 2.0 * pi * static_cast<double>(q + 1) / static_cast<double>(m);
        for (Eigen::Index s = 0; s < n; ++s)
            ft(q, s) = std::exp(-I * k * static_cast<double>(s));
    }
    const Eigen::MatrixXd amp = (ft * ms.eigenvectors).cwiseAbs2();
    ms.bloch_k.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index best = 0;
        amp.col(j).maxCoeff(&best);
        double k = -pi + 2.0 * pi * static_cast<double>(best + 1) / static_cast<double>(m);
        if (k < 0.0) {
            // mirror image has the same weight for reflection-symmetric chains
            const Eigen::Index mirror = m - 2 - best;
            if (mirror >= 0 && amp(mirror, j) >= amp(best, j) * (1.0 - 1e-9))
                k = -k;
        }
        ms.bloch_k[j] = k;
    }
    return ms;
}

CMatrix greens_matrix(const CMatrix& h, cd omega)
{
    const Eigen::Index n = h.rows();
    CMatrix a = omega * CMatrix::Identity(n, n) - h;
    Eigen::PartialPivLU<CMatrix> lu(a);
    if (!(lu.rcond() > 1e-13))
        throw SingularError("greens_matrix: omega coincides with an eigenfrequency");
    return lu.inverse();
}

CMatrix tridiagonal_inverse_oracle(std::size_t n, double phi, double gamma1d)
{
    if (n == 0)
        throw DomainError("tridiagonal_inverse_oracle: empty chain");
    const double s = std::sin(phi);
    if (std::abs(s) < 1e-8)
        throw DomainError("tridiagonal_inverse_oracle: Bragg-degenerate phase");
    const auto N = static_cast<Eigen::Index>(n);
    CMatrix t = CMatrix::Zero(N, N);
    if (N == 1) {
        t(0, 0) = I / gamma1d;
        return t;
    }
    const double cot = std::cos(phi) / s;
    for (Eigen::Index i = 0; i < N; ++i) {
        t(i, i) = -cot;
        if (i + 1 < N)
            t(i, i + 1) = t(i + 1, i) = 0.5 / s;
    }
    t(0, 0) = t(N - 1, N - 1) = -0.5 * cot + 0.5 * I;
    return t / gamma1d;
}

cd dispersion_guided(cd omega, double phi, double gamma1d, double delta_omega, double gamma)
{
    const cd c = std::cos(phi) + gamma1d * std::sin(phi) / (omega - delta_omega + I * gamma);
    cd kd = std::acos(c);
    if (kd.imag() < 0.0)
        kd = -kd;
    return kd;
}

cd omega_of_k(cd kd, double phi, double gamma1d, double delta_omega, double gamma)
{
    return delta_omega - I * gamma + gamma1d * std::sin(phi) / (std::cos(kd) - std::cos(phi));
}

namespace {

cd polylog_series(int s, cd z)
{
    cd sum = 0.0, zk = z;
    for (int k = 1; k < 100000; ++k) {
        const cd term = zk / std::pow(static_cast<double>(k), s);
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)))
            break;
        zk *= z;
    }
    return sum;
}

// expansion in mu = ln z, valid for |mu| < 2 pi
cd polylog_log(int s, cd z)
{
    const cd mu = std::log(z);
    double harmonic = 0.0;
    for (int j = 1; j < s; ++j)
        harmonic += 1.0 / j;
    cd pw = 1.0;
    double fact = 1.0;
    cd sum = 0.0;
    int small = 0;
    for (int k = 0; k < 160; ++k) {
        if (k > 0) {
            pw *= mu;
            fact *= k;
        }
        cd term;
        if (k == s - 1)
            term = pw / fact * (harmonic - std::log(-mu));
        else
            term = boost::math::zeta(static_cast<double>(s - k)) * pw / fact;
        sum += term;
        if (k > s && std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) {
            if (++small > 3)
                break;
        } else {
            small = 0;
        }
    }
    return sum;
}

}  // namespace

cd polylog(int s, cd z)
{
    if (s < 1)
        throw DomainError("polylog: order must be >= 1");
    if (std::abs(z) > 1.0 + 1e-12)
        throw DomainError("polylog: |z| must not exceed 1");
    if (s == 1)
        return -std::log(1.0 - z);
    if (std::abs(z - 1.0) < 1e-15)
        return boost::math::zeta(static_cast<double>(s));
    if (std::abs(z) < 0.5)
        return polylog_series(s, z);
    return polylog_log(s, z);
}

double dispersion_freespace(double kd, double d_over_lambda0, double gamma0)
{
    if (!(d_over_lambda0 > 0.0))
        throw DomainError("dispersion_freespace: spacing must be positive");
    const double x = 2.0 * pi * d_over_lambda0;
    cd acc = 0.0;
    for (double sgn : {1.0, -1.0}) {
        const cd xi = std::exp(I * (x + sgn * kd));
        acc += polylog(3, xi) - I * x * polylog(2, xi) + x * x * std::log(1.0 - xi);
    }
    return 1.5 * gamma0 / (x * x * x) * acc.real();
}

cd dispersion_chiral(double kd, double xi, double phi, double gamma1d)
{
    if (xi < 0.0)
        throw DomainError("dispersion_chiral: xi must be non-negative");
    const double sm = std::sin(0.5 * (kd - phi));
    const double sp = std::sin(0.5 * (kd + phi));
    if (std::abs(sm) < 1e-14 || std::abs(sp) < 1e-14)
        return {divergent, 0.0};
    const double cm = std::cos(0.5 * (kd - phi)) / sm;
    const double cp = std::cos(0.5 * (kd + phi)) / sp;
    return gamma1d / (1.0 + xi) * (xi * cp - cm);
}

BandInfo band_and_bragg(double phi, double gamma1d, double gamma_over_omega0, int m)
{
    BandInfo b;
    if (std::abs(std::sin(phi)) > 1e-12) {
        b.gap_valid = true;
        const double t = std::tan(0.5 * phi);
        const double lo = -gamma1d * t, hi = gamma1d / t;
        b.gap_lo = std::min(lo, hi);
        b.gap_hi = std::max(lo, hi);
    }
    if (gamma_over_omega0 > 0.0) {
        const double omega0 = gamma1d / gamma_over_omega0;
        b.delta_bragg = std::sqrt(2.0 * gamma1d * omega0 / pi);
        b.delta_bragg_over_omega0 = std::sqrt(2.0 * gamma_over_omega0 / pi);
        b.n_star = std::sqrt(1.0 / gamma_over_omega0) / m;
    }
    return b;
}

double subradiant_estimate(int nu, std::size_t n, double phi, double gamma1d)
{
    const double N = static_cast<double>(n);
    return gamma1d * pi * pi * phi * phi * nu * nu / (8.0 * N * N * N);
}

}  // namespace wqed
