#include "wqed/twophoton.hpp"

#include "linalg.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>

namespace wqed {

namespace {

double decay_total(const Coupling& c, std::size_t n)
{
    return c.gamma_nr + static_cast<double>(n) * c.gamma1d;
}

cd s_dicke(cd w, double big_gamma)
{
    return 1.0 / (-w - I * big_gamma);
}

// two-photon resonance factor of the d = 0 kernel; the N = 1 pole cancels
cd pair_factor(cd eps, std::size_t n, const Coupling& c)
{
    const double g = c.gamma_nr;
    const double gt = decay_total(c, n);
    if (n == 1)
        return eps + I * gt;
    const double nm1 = static_cast<double>(n - 1);
    return (eps + I * g) * (eps + I * gt) / (eps + I * (nm1 * c.gamma1d + g));
}

int dir_check(int d)
{
    if (d != 1 && d != -1)
        throw DomainError("direction index must be +1 or -1");
    return d;
}

// y_j solves (T + shift) y = b for upper-triangular T
CVector upper_solve(const CMatrix& t, cd shift, CVector b)
{
    const Eigen::Index n = t.rows();
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        cd acc = b(i);
        for (Eigen::Index k = i + 1; k < n; ++k)
            acc -= t(i, k) * b(k);
        const cd d = t(i, i) + shift;
        if (std::abs(d) < 1e-13)
            throw SingularError("sigma_pair: 2 eps coincides with a pair pole");
        b(i) = acc / d;
    }
    return b;
}

double frob(const CMatrix& m)
{
    return std::sqrt(m.cwiseAbs2().sum());
}

Eigen::MatrixXd sine_basis(Eigen::Index n, bool staggered)
{
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index m = 0; m < n; ++m) {
            double v = std::sin(pi * static_cast<double>(j + 1) * (static_cast<double>(m) + 0.5) /
                                static_cast<double>(n));
            if (staggered && (m % 2 == 1))
                v = -v;
            s(j, m) = v;
        }
        s.row(j).normalize();
    }
    return s;
}

}  // namespace

std::string to_string(PairClass c)
{
    switch (c) {
    case PairClass::scattering: return "scattering";
    case PairClass::fermionized: return "fermionized";
    case PairClass::bound: return "bound";
    case PairClass::localized: return "localized";
    default: return "unclassified";
    }
}

cd kernel_dicke(cd w1p, cd w2p, cd w1, cd w2, std::size_t n, const Coupling& c)
{
    if (n == 0)
        throw DomainError("kernel_dicke: N must be >= 1");
    const double gt = decay_total(c, n);
    const cd eps = 0.5 * (w1 + w2);
    const double N = static_cast<double>(n);
    return 4.0 * N * c.gamma1d * c.gamma1d * s_dicke(w1, gt) * s_dicke(w2, gt) * s_dicke(w1p, gt) *
           s_dicke(w2p, gt) * pair_factor(eps, n, c);
}

cd kernel_dicke(double w, double eps, std::size_t n, const Coupling& c)
{
    return kernel_dicke(eps - w, eps + w, eps, eps, n, c);
}

cd bethe_oracle(cd w1p, cd w2p, cd w1, cd w2, std::size_t n, double gamma1d)
{
    const double N = static_cast<double>(n);
    auto s = [&](cd w) { return 1.0 / (w + I * N * gamma1d); };
    const cd e = 0.5 * (w1 + w2);
    cd tail;
    if (n == 1)
        tail = e + I * gamma1d;
    else
        tail = e * (e + I * N * gamma1d) / (e + I * (N - 1.0) * gamma1d);
    return 4.0 * gamma1d * gamma1d * s(w1) * s(w2) * s(w1p) * s(w2p) * N * tail;
}

cd bound_pair_amplitude(double x1, double x2, double eps, std::size_t n, double gamma1d)
{
    const double ng = static_cast<double>(n) * gamma1d;
    const cd k = eps + I * ng, p = eps - I * ng;
    auto tn = [&](cd q) { return -q / (q + I * ng); };
    cd region = 1.0;
    if (x1 > 0.0 && x2 > 0.0)
        region = tn(k) * tn(p);
    else if (x1 > 0.0 || x2 > 0.0)
        region = tn(k);
    return std::exp(I * eps * (x1 + x2)) * std::exp(-ng * std::abs(x1 - x2)) * region;
}

CMatrix sigma_pair(const CMatrix& h, cd eps)
{
    const Eigen::Index n = h.rows();
    Eigen::ComplexSchur<CMatrix> schur(h);
    const CMatrix& u = schur.matrixU();
    const CMatrix& t = schur.matrixT();
    // H X + X H^T - 2 eps X = e_n e_n^T, with X = U Y U^T and T Y + Y T^T - 2 eps Y = a a^T
    CMatrix sigma(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const CVector a = u.row(col).adjoint();
        CMatrix y(n, n);
        for (Eigen::Index j = n - 1; j >= 0; --j) {
            CVector b = a * a(j);
            for (Eigen::Index k = j + 1; k < n; ++k)
                b -= t(j, k) * y.col(k);
            y.col(j) = upper_solve(t, t(j, j) - 2.0 * eps, b);
        }
        const CMatrix x = u * y * u.transpose();
        for (Eigen::Index m = 0; m < n; ++m)
            sigma(m, col) = I * x(m, m);
    }
    return sigma;
}

CMatrix q_matrix(const CMatrix& sigma, double u)
{
    const Eigen::Index n = sigma.rows();
    if (std::isinf(u)) {
        Eigen::PartialPivLU<CMatrix> lu(sigma);
        if (!(lu.rcond() > 1e-14))
            throw SingularError("q_matrix: Sigma is singular (eps at a pair eigenvalue)");
        return lu.inverse();
    }
    const CMatrix a = CMatrix::Identity(n, n) - I * u * sigma;
    Eigen::PartialPivLU<CMatrix> lu(a);
    if (!(lu.rcond() > 1e-14))
        throw SingularError("q_matrix: 1 - iU Sigma is singular");
    return -I * u * lu.inverse();
}

PairKernel::PairKernel(const AtomChain& chain, const Coupling& c, double eps)
    : chain_(chain), c_(c), eps_(eps)
{
    if (!c.markovian)
        throw DomainError("PairKernel: the two-photon kernel needs the Markovian Hamiltonian");
    h_ = effective_hamiltonian(chain, c);
    const CMatrix q = q_matrix(sigma_pair(h_, eps), c.anharmonicity_u);
    const auto n = static_cast<Eigen::Index>(chain.size());
    const CMatrix g = greens_matrix(h_, eps);
    CVector ein(n);
    for (Eigen::Index i = 0; i < n; ++i)
        ein(i) = std::exp(I * chain.phases[i]);
    const CVector sin = g * ein;
    w_ = q * sin.cwiseProduct(sin);

    modes_ = eigenmodes(h_);
    const double asym = (h_ - h_.transpose()).cwiseAbs().maxCoeff();
    const CMatrix& p = modes_.eigenvectors;
    const double ortho = (p.transpose() * p - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    residues_ok_ = asym < 1e-12 && !modes_.any_degenerate() && ortho < 1e-8;
}

CVector PairKernel::s_out(cd w, int dir) const
{
    const auto n = static_cast<Eigen::Index>(chain_.size());
    const CMatrix g = greens_matrix(h_, w);
    CVector e(n);
    for (Eigen::Index i = 0; i < n; ++i)
        e(i) = std::exp(-I * static_cast<double>(dir) * chain_.phases[i]);
    return g.transpose() * e;
}

cd PairKernel::operator()(cd w1p, int mu, int nu) const
{
    dir_check(mu);
    dir_check(nu);
    const double gm = mu > 0 ? c_.gamma_right : c_.gamma_left;
    const double gn = nu > 0 ? c_.gamma_right : c_.gamma_left;
    const double pref = 4.0 * std::sqrt(gm * gn) * c_.gamma_right;
    const CVector a = s_out(w1p, mu);
    const CVector b = s_out(2.0 * eps_ - w1p, nu);
    return -2.0 * I * pref * (a.cwiseProduct(b).transpose() * w_)(0, 0);
}

cd PairKernel::fourier_residue(double tau, int mu) const
{
    dir_check(mu);
    if (!residues_ok_)
        throw DomainError("fourier_residue: eigen-decomposition not usable for residues");
    const double gm = mu > 0 ? c_.gamma_right : c_.gamma_left;
    const double pref = 4.0 * gm * c_.gamma_right;
    const auto n = static_cast<Eigen::Index>(chain_.size());
    const CMatrix& p = modes_.eigenvectors;
    const CVector& om = modes_.eigenvalues;
    CVector e(n);
    for (Eigen::Index i = 0; i < n; ++i)
        e(i) = std::exp(-I * static_cast<double>(mu) * chain_.phases[i]);
    const CVector bnu = p.transpose() * e;
    const double at = std::abs(tau);
    CMatrix kern(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            kern(a, b) = -I * std::exp(-I * (om(b) - eps_) * at) / (2.0 * eps_ - om(a) - om(b));
    cd acc = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
        const CVector bm = p.row(m).transpose().cwiseProduct(bnu);
        acc += w_(m) * (bm.transpose() * kern * bm)(0, 0);
    }
    return -2.0 * I * pref * acc;
}

cd kernel_general(const AtomChain& chain, const Coupling& c, double eps, cd w1p, int mu, int nu)
{
    return PairKernel(chain, c, eps)(w1p, mu, nu);
}

namespace {

cd fourier_quadrature(const PairKernel& k, double tau, int mu, double scale)
{
    using boost::math::quadrature::gauss_kronrod;
    // the integrand is even in w: integrate cos(w tau) M over w >= 0, w = L t / (1 - t^2)
    auto f = [&](double t) -> cd {
        if (t >= 1.0)
            return 0.0;
        const double den = 1.0 - t * t;
        const double w = scale * t / den;
        const double jac = scale * (1.0 + t * t) / (den * den);
        return std::cos(w * tau) * k(k.eps() - w, mu, mu) * jac;
    };
    double err = 0.0;
    const cd val = gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 18, 1e-11, &err);
    return val / pi;
}

double g2_from(cd a, cd j)
{
    if (std::norm(a) < 1e-28)
        return divergent;
    return std::norm(1.0 + I * j / (2.0 * a * a));
}

}  // namespace

double g2_tau(double eps, double tau, Geometry geo, const AtomChain& chain, const Coupling& c,
              G2Method method)
{
    const RT rt = rt_from_green(chain, c, eps);
    const cd a = geo == Geometry::transmit ? rt.t : rt.r;
    if (std::norm(a) < 1e-28)
        return divergent;
    const int mu = geo == Geometry::transmit ? 1 : -1;
    const PairKernel k(chain, c, eps);
    const bool use_res = method == G2Method::residue ||
                         (method == G2Method::automatic && k.residues_usable());
    cd j;
    if (use_res) {
        j = k.fourier_residue(tau, mu);
    } else {
        const double scale = 40.0 * decay_total(c, chain.size());
        j = fourier_quadrature(k, tau, mu, scale);
    }
    return g2_from(a, j);
}

double g2_tau_dicke(double eps, double tau, Geometry geo, std::size_t n, const Coupling& c)
{
    const RT rt = dicke_rt(n, eps, c);
    const cd a = geo == Geometry::transmit ? rt.t : rt.r;
    const double gt = decay_total(c, n);
    const double N = static_cast<double>(n);
    const cd se = s_dicke(eps, gt);
    const cd amp = 4.0 * N * c.gamma1d * c.gamma1d * se * se * pair_factor(eps, n, c);
    const double at = std::abs(tau);
    const cd j = amp * (-I) * std::exp((I * eps - gt) * at) / (2.0 * (eps + I * gt));
    return g2_from(a, j);
}

double g2_zero_resonant(std::size_t n, double gamma1d, double gamma, Geometry geo)
{
    if (n == 0)
        throw DomainError("g2_zero_resonant: N must be >= 1");
    const double N = static_cast<double>(n);
    const double den = 1.0 - gamma1d / (gamma + N * gamma1d);
    if (geo == Geometry::reflect) {
        if (n == 1)
            return 0.0;
        const double v = (1.0 - 1.0 / N) / den;
        return v * v;
    }
    if (gamma == 0.0)
        return divergent;
    const double v = (1.0 - gamma1d / gamma) / den;
    return v * v;
}

CoherentCorrections coherent_corrections(double eps, double alpha2_over_l, std::size_t n,
                                         const Coupling& c)
{
    const RT rt = dicke_rt(n, eps, c);
    const cd t = rt.t, r = rt.r;
    const cd m0 = kernel_dicke(0.0, eps, n, c);
    const cd sum = std::conj(t) + std::conj(r);
    CoherentCorrections out;
    out.T_coh = std::norm(t) - alpha2_over_l * (m0 * std::conj(t) * sum).imag();
    out.R_coh = std::norm(r) - alpha2_over_l * (m0 * std::conj(r) * sum).imag();
    const double gt = decay_total(c, n);
    const cd se = s_dicke(eps, gt);
    const cd amp = 4.0 * static_cast<double>(n) * c.gamma1d * c.gamma1d * se * se *
                   pair_factor(eps, n, c);
    out.I_incoh = alpha2_over_l * std::norm(amp) / (4.0 * gt * (eps * eps + gt * gt));
    return out;
}

double incoherent_rate_numeric(double eps, double alpha2_over_l, std::size_t n, const Coupling& c)
{
    using boost::math::quadrature::gauss_kronrod;
    const double scale = 4.0 * decay_total(c, n) + std::abs(eps);
    auto f = [&](double t) -> double {
        if (t >= 1.0)
            return 0.0;
        const double den = 1.0 - t * t;
        const double w = scale * t / den;
        return std::norm(kernel_dicke(w, eps, n, c)) * scale * (1.0 + t * t) / (den * den);
    };
    const double v = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 20, 1e-13);
    return alpha2_over_l * v / pi;
}

double participation_ratio(const CMatrix& psi)
{
    const Eigen::VectorXd p = psi.cwiseAbs2().rowwise().sum();
    const double tot = p.sum();
    if (tot == 0.0)
        return 0.0;
    return tot * tot / p.squaredNorm();
}

double fermionic_overlap(const CMatrix& psi, int j1, int j2)
{
    const Eigen::Index n = psi.rows();
    if (j1 < 1 || j2 < 1 || j1 > n || j2 > n || j1 == j2)
        throw DomainError("fermionic_overlap: standing-wave indices out of range");
    CMatrix sg = psi;
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k)
            sg(m, k) *= m > k ? 1.0 : (m < k ? -1.0 : 0.0);
    const double norm = frob(psi);
    double best = 0.0;
    for (bool stag : {false, true}) {
        const Eigen::MatrixXd s = sine_basis(n, stag);
        const cd x = (s.row(j1 - 1).cast<cd>() * sg * s.row(j2 - 1).transpose().cast<cd>())(0, 0);
        const cd y = (s.row(j2 - 1).cast<cd>() * sg * s.row(j1 - 1).transpose().cast<cd>())(0, 0);
        best = std::max(best, std::abs(x - y) / std::sqrt(2.0) / norm);
    }
    return best;
}

double best_fermionic_overlap(const CMatrix& psi, int* j1, int* j2)
{
    const Eigen::Index n = psi.rows();
    CMatrix sg = psi;
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = 0; k < n; ++k)
            sg(m, k) *= m > k ? 1.0 : (m < k ? -1.0 : 0.0);
    const double norm = frob(psi);
    double best = 0.0;
    for (bool stag : {false, true}) {
        const Eigen::MatrixXcd s = sine_basis(n, stag).cast<cd>();
        const CMatrix x = s * sg * s.transpose();
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = a + 1; b < n; ++b) {
                const double v = std::abs(x(a, b) - x(b, a)) / std::sqrt(2.0) / norm;
                if (v > best) {
                    best = v;
                    if (j1) *j1 = static_cast<int>(a + 1);
                    if (j2) *j2 = static_cast<int>(b + 1);
                }
            }
    }
    return best;
}

double best_bosonic_overlap(const CMatrix& psi)
{
    const Eigen::Index n = psi.rows();
    const double norm = frob(psi);
    double best = 0.0;
    for (bool stag : {false, true}) {
        const Eigen::MatrixXd s = sine_basis(n, stag);
        const CMatrix y = s.cast<cd>() * psi * s.transpose().cast<cd>();
        const Eigen::MatrixXd s2 = s.cwiseAbs2();
        const Eigen::MatrixXd diag = s2 * s2.transpose();   // sum_m a_m^2 b_m^2
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = a; b < n; ++b) {
                const double an2 = (2.0 + (a == b ? 2.0 : 0.0) - 4.0 * diag(a, b)) / 2.0;
                if (an2 <= 1e-12)
                    continue;
                const double v = std::abs(y(a, b) + y(b, a)) / std::sqrt(2.0) / std::sqrt(an2) / norm;
                best = std::max(best, v);
            }
    }
    return best;
}

double best_bound_overlap(const CMatrix& psi)
{
    const Eigen::Index n = psi.rows();
    const double norm2 = psi.cwiseAbs2().sum();
    double best = 0.0;
    const Eigen::Index nk = 2 * n;
    std::vector<double> cw_tab(static_cast<std::size_t>(2 * n));
    for (Eigen::Index q = 0; q <= nk; ++q) {
        const double kk = pi * static_cast<double>(q) / static_cast<double>(nk);
        for (Eigen::Index s = 0; s < 2 * n; ++s)
            cw_tab[static_cast<std::size_t>(s)] = std::cos(kk * static_cast<double>(s + 2) / 2.0);
        std::vector<cd> num(n, 0.0);
        std::vector<double> den(n, 0.0);
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index k = 0; k < n; ++k) {
                if (m == k)
                    continue;
                const double cw = cw_tab[static_cast<std::size_t>(m + k)];
                const auto r = static_cast<std::size_t>(std::abs(m - k));
                num[r] += cw * psi(m, k);
                den[r] += cw * cw;
            }
        double acc = 0.0;
        for (Eigen::Index r = 1; r < n; ++r)
            if (den[r] > 1e-12)
                acc += std::norm(num[r]) / den[r];
        best = std::max(best, std::sqrt(acc / norm2));
    }
    return best;
}

std::vector<PairState> pair_eigenstates(const CMatrix& h, bool classify)
{
    const Eigen::Index n = h.rows();
    if (n < 2)
        throw DomainError("pair_eigenstates: need at least two atoms");
    std::vector<std::pair<Eigen::Index, Eigen::Index>> basis;
    Eigen::MatrixXi index = Eigen::MatrixXi::Constant(n, n, -1);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index k = m + 1; k < n; ++k) {
            index(m, k) = index(k, m) = static_cast<int>(basis.size());
            basis.emplace_back(m, k);
        }
    const auto dim = static_cast<Eigen::Index>(basis.size());
    CMatrix a = CMatrix::Zero(dim, dim);
    for (Eigen::Index row = 0; row < dim; ++row) {
        const auto [m, k] = basis[static_cast<std::size_t>(row)];
        for (Eigen::Index q = 0; q < n; ++q) {
            if (q != k)
                a(row, index(q, k)) += h(m, q);
            if (q != m)
                a(row, index(m, q)) += h(k, q);
        }
    }
    CVector evals;
    CMatrix evecs;
    detail::general_eig(a, evals, evecs);

    const Eigen::Index nkq = std::max<Eigen::Index>(64, 4 * n);
    std::vector<double> kgrid(static_cast<std::size_t>(nkq));
    CMatrix ft(n, nkq);
    for (Eigen::Index q = 0; q < nkq; ++q) {
        const double kk = -pi + 2.0 * pi * static_cast<double>(q + 1) / static_cast<double>(nkq);
        kgrid[static_cast<std::size_t>(q)] = kk;
        for (Eigen::Index s = 0; s < n; ++s)
            ft(s, q) = std::exp(I * kk * static_cast<double>(s + 1));
    }

    std::vector<PairState> out;
    out.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index j = 0; j < dim; ++j) {
        CVector v = evecs.col(j);
        const cd s = 2.0 * (v.transpose() * v)(0, 0);
        if (std::abs(s) > 1e-14)
            v /= std::sqrt(s);
        PairState ps;
        ps.energy = 0.5 * evals(j);
        ps.amplitude = CMatrix::Zero(n, n);
        for (Eigen::Index row = 0; row < dim; ++row) {
            const auto [m, k] = basis[static_cast<std::size_t>(row)];
            ps.amplitude(m, k) = ps.amplitude(k, m) = v(row);
        }
        const Eigen::MatrixXd kabs = (ps.amplitude * ft).cwiseAbs2();
        ps.kgrid = kgrid;
        ps.kmap.resize(static_cast<std::size_t>(nkq));
        for (Eigen::Index q = 0; q < nkq; ++q)
            ps.kmap[static_cast<std::size_t>(q)] = kabs.col(q).sum() / static_cast<double>(n);
        out.push_back(std::move(ps));
    }
    std::stable_sort(out.begin(), out.end(), [](const PairState& x, const PairState& y) {
        return x.energy.imag() < y.energy.imag();
    });

    if (classify) {
        const double nn = static_cast<double>(n);
        for (auto& ps : out) {
            const CMatrix& psi = ps.amplitude;
            const double fo = best_fermionic_overlap(psi);
            const double bo = best_bosonic_overlap(psi);
            if (fo >= 0.9) {
                ps.label = PairClass::fermionized;
                ps.overlap = fo;
                continue;
            }
            if (bo >= 0.9) {
                ps.label = PairClass::scattering;
                ps.overlap = bo;
                continue;
            }
            double wsum = 0.0, dsum = 0.0;
            for (Eigen::Index m = 0; m < n; ++m)
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double w = std::norm(psi(m, k));
                    wsum += w;
                    dsum += w * static_cast<double>(std::abs(m - k));
                }
            const double bd = best_bound_overlap(psi);
            if (bd >= 0.9 && dsum / wsum < nn / 4.0) {
                ps.label = PairClass::bound;
                ps.overlap = bd;
                continue;
            }
            const double pr = participation_ratio(psi);
            if (pr < nn / 5.0) {
                ps.label = PairClass::localized;
                ps.overlap = 1.0 - pr / nn;
                continue;
            }
            ps.label = PairClass::unclassified;
            ps.overlap = std::max({fo, bo, bd});
        }
    }
    return out;
}

}  // namespace wqed
