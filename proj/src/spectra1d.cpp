#include "wqed/spectra1d.hpp"

#include <cmath>
#include <random>
#include <thread>

namespace wqed {

namespace {

cd cot_stable(cd z)
{
    if (z.imag() > 0.0) {
        const cd e = std::exp(2.0 * I * z);
        return I * (e + 1.0) / (e - 1.0);
    }
    const cd e = std::exp(-2.0 * I * z);
    return I * (1.0 + e) / (1.0 - e);
}

cd csc_stable(cd z)
{
    if (z.imag() > 0.0)
        return 2.0 * I * std::exp(I * z) / (std::exp(2.0 * I * z) - 1.0);
    return 2.0 * I * std::exp(-I * z) / (1.0 - std::exp(-2.0 * I * z));
}

Matrix2c atom_matrix(const AtomRT& a)
{
    if (std::abs(a.t_bwd) == 0.0)
        throw SingularError("transfer matrix: backward transmission vanishes");
    Matrix2c m;
    m << a.t_fwd * a.t_bwd - a.r * a.r, a.r, -a.r, 1.0;
    return m / a.t_bwd;
}

// a lossless symmetric atom on resonance reflects fully and has no transfer matrix;
// the chain then reflects off its first atom
bool is_mirror(const AtomRT& a) { return std::abs(a.t_bwd) == 0.0; }

RT mirror_rt(const AtomRT& a, double kz_first) { return {a.r * std::exp(2.0 * I * kz_first), 0.0}; }

// M_total = prod D(-z_m) M D(z_m), written as gaps between consecutive atoms.
// With log_scale set, the running product is renormalised so deep stop bands cannot
// overflow; the true product is then the result times exp(*log_scale).
template <class Phases>
Matrix2c lattice_product(const Matrix2c& m_atom, const Phases& kz, double* log_scale = nullptr)
{
    Matrix2c tot = Matrix2c::Identity();
    double prev = 0.0;
    if (log_scale)
        *log_scale = 0.0;
    for (double z : kz) {
        const cd e = std::exp(I * (z - prev));
        tot.row(0) *= e;
        tot.row(1) /= e;
        tot = (m_atom * tot).eval();
        prev = z;
        if (log_scale) {
            const double big = tot.cwiseAbs().maxCoeff();
            if (big > 1e100) {
                tot /= big;
                *log_scale += std::log(big);
            }
        }
    }
    const cd e = std::exp(-I * prev);
    tot.row(0) *= e;
    tot.row(1) /= e;
    return tot;
}

struct ChainAmplitudes {
    cd r, t_fwd, t_bwd;
};

ChainAmplitudes scaled_chain(const AtomChain& chain, const Coupling& c, double omega)
{
    c.validate();
    const AtomRT a = atom_rt(omega, c);
    const double s = photon_scale(c, omega);
    std::vector<double> kz(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i)
        kz[i] = chain.phases[i] * s;
    double ls = 0.0;
    const Matrix2c m = lattice_product(atom_matrix(a), kz, &ls);
    if (std::abs(m(1, 1)) == 0.0)
        throw SingularError("transfer matrix: M22 vanishes");
    // each atom contributes t_fwd/t_bwd to the determinant, free propagation has unit determinant
    const cd det = std::pow(a.t_fwd / a.t_bwd, static_cast<int>(chain.size()));
    const double shrink = std::exp(-ls);
    return {-m(1, 0) / m(1, 1), det / m(1, 1) * shrink, shrink / m(1, 1)};
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

AtomRT atom_rt(cd omega, const Coupling& c)
{
    const cd den = -omega - I * (c.gamma_nr + c.gamma_right + c.gamma_left);
    AtomRT a;
    a.r = 2.0 * I * std::sqrt(c.gamma_right * c.gamma_left) / den;
    a.t_fwd = 1.0 + 2.0 * I * c.gamma_right / den;
    a.t_bwd = 1.0 + 2.0 * I * c.gamma_left / den;
    return a;
}

Matrix2c transfer_chain(const AtomChain& chain, const Coupling& c, double omega)
{
    c.validate();
    const Matrix2c m = atom_matrix(atom_rt(omega, c));
    const double s = photon_scale(c, omega);
    std::vector<double> kz(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i)
        kz[i] = chain.phases[i] * s;
    return lattice_product(m, kz);
}

RT rt_from_transfer(const Matrix2c& m, std::optional<cd> det)
{
    if (std::abs(m(1, 1)) == 0.0)
        throw SingularError("transfer matrix: M22 vanishes");
    return {-m(1, 0) / m(1, 1), det.value_or(m.determinant()) / m(1, 1)};
}

cd transfer_determinant(std::size_t n, double omega, const Coupling& c)
{
    // each atom contributes t_fwd/t_bwd, free propagation has unit determinant
    const AtomRT a = atom_rt(omega, c);
    return std::pow(a.t_fwd / a.t_bwd, static_cast<int>(n));
}

RT chain_rt(const AtomChain& chain, const Coupling& c, double omega)
{
    if (chain.size() == 0)
        return {0.0, 1.0};
    const AtomRT a = atom_rt(omega, c);
    if (is_mirror(a)) {
        c.validate();
        return mirror_rt(a, chain.phases.front() * photon_scale(c, omega));
    }
    const ChainAmplitudes x = scaled_chain(chain, c, omega);
    return {x.r, x.t_fwd};
}

RT periodic_rt(std::size_t n, double phi, const Coupling& c, double omega)
{
    if (n == 0)
        return {0.0, 1.0};
    if (!c.symmetric())
        throw DomainError("periodic_rt: closed form needs symmetric coupling");
    const AtomRT a = atom_rt(omega, c);
    if (is_mirror(a))
        return chain_rt(AtomChain::periodic(n, phi), c, omega);
    const double kd = phi * photon_scale(c, omega);
    const cd e = std::exp(I * kd);
    const cd tt = a.t_fwd * e;
    const cd cosk = (e * (a.t_fwd * a.t_fwd - a.r * a.r) + 1.0 / e) / (2.0 * a.t_fwd);
    cd K = std::acos(cosk);
    const cd sink = std::sin(K);
    if (std::abs(sink) < 1e-12)
        return chain_rt(AtomChain::periodic(n, phi), c, omega);
    const double N = static_cast<double>(n);
    const cd rho = cosk - cot_stable(N * K) * sink;
    const cd den = 1.0 - tt * rho;
    RT out;
    out.r = a.r / den;   // reference plane at the first atom
    out.t = tt * sink * csc_stable(N * K) / den * std::exp(-I * N * kd);
    return out;
}

RT dicke_rt(std::size_t n, double omega, const Coupling& c)
{
    if (n == 0)
        throw DomainError("dicke_rt: N must be >= 1");
    const double N = static_cast<double>(n);
    const cd r = I * N * c.gamma1d / (-omega - I * (c.gamma_nr + N * c.gamma1d));
    return {r, 1.0 + r};
}

RT rt_from_green(const AtomChain& chain, const Coupling& c, double omega)
{
    const CMatrix h = effective_hamiltonian(chain, c, cd(omega));
    const CMatrix g = greens_matrix(h, omega);
    const double s = photon_scale(c, omega);
    const auto n = static_cast<Eigen::Index>(chain.size());
    CVector ein(n), eout(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ein(i) = std::exp(I * chain.phases[i] * s);
        eout(i) = 1.0 / ein(i);
    }
    const cd back = (ein.transpose() * g * ein)(0, 0);
    const cd fwd = (eout.transpose() * g * ein)(0, 0);
    return {-2.0 * I * std::sqrt(c.gamma_right * c.gamma_left) * back,
            1.0 - 2.0 * I * c.gamma_right * fwd};
}

SpectralResult chain_spectrum(const AtomChain& chain, const Coupling& c,
                              const std::vector<double>& grid)
{
    SpectralResult res;
    res.grid = grid;
    for (double w : grid) {
        cd r = 0.0, tf = 1.0, tb = 1.0;
        const AtomRT a = atom_rt(w, c);
        if (chain.size() > 0 && is_mirror(a)) {
            r = mirror_rt(a, chain.phases.front() * photon_scale(c, w)).r;
            tf = tb = 0.0;
        } else if (chain.size() > 0) {
            const ChainAmplitudes x = scaled_chain(chain, c, w);
            r = x.r;
            tf = x.t_fwd;
            tb = x.t_bwd;
        }
        res.r.push_back(r);
        res.t_fwd.push_back(tf);
        res.t_bwd.push_back(tb);
        const double R = std::norm(r), T = std::norm(tf);
        res.R.push_back(R);
        res.T.push_back(T);
        res.loss.push_back(1.0 - R - T);
    }
    return res;
}

double optical_depth(cd t_resonant)
{
    const double T = std::norm(t_resonant);
    if (T == 0.0)
        return divergent;
    if (T > 1.0 + 1e-12)
        throw DomainError("optical_depth: |t| must not exceed 1");
    return -std::log(T);
}

EnsembleResult ensemble_bragg_reflectance(const EnsembleSpec& spec, const std::vector<double>& grid)
{
    if (grid.empty())
        throw DomainError("ensemble: empty frequency grid");
    if (spec.trials < 1)
        throw DomainError("ensemble: trials must be >= 1");
    if (spec.fill < 0.0 || spec.fill > 1.0)
        throw DomainError("ensemble: fill must lie in [0, 1]");
    spec.coupling.validate();

    const std::size_t ng = grid.size();
    std::vector<Matrix2c> m_atom(ng);
    std::vector<double> kd(ng);
    std::vector<bool> mirror(ng, false);
    for (std::size_t g = 0; g < ng; ++g) {
        const AtomRT a = atom_rt(grid[g], spec.coupling);
        mirror[g] = is_mirror(a);
        if (!mirror[g])
            m_atom[g] = atom_matrix(a);
        kd[g] = spec.phi * photon_scale(spec.coupling, grid[g]);
    }

    std::vector<std::vector<double>> per_trial(spec.trials, std::vector<double>(ng));
    auto run_trial = [&](std::size_t trial) {
        std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(trial + 1)));
        std::vector<double> sites;
        sites.reserve(spec.sites);
        for (std::size_t s = 0; s < spec.sites; ++s) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u < spec.fill)
                sites.push_back(static_cast<double>(s));
        }
        std::vector<double> kz(sites.size());
        for (std::size_t g = 0; g < ng; ++g) {
            if (sites.empty()) {
                per_trial[trial][g] = 0.0;
                continue;
            }
            if (mirror[g]) {
                per_trial[trial][g] = 1.0;
                continue;
            }
            for (std::size_t i = 0; i < sites.size(); ++i)
                kz[i] = sites[i] * kd[g];
            double ls = 0.0;
            per_trial[trial][g] = std::norm(rt_from_transfer(lattice_product(m_atom[g], kz, &ls)).r);
        }
    };

    const unsigned nt = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(spec.trials)));
    if (nt == 1) {
        for (std::size_t t = 0; t < spec.trials; ++t)
            run_trial(t);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < spec.trials; t += nt)
                    run_trial(t);
            });
        for (auto& th : pool)
            th.join();
    }

    EnsembleResult res;
    res.grid = grid;
    res.mean_R.assign(ng, 0.0);
    res.stderr_R.assign(ng, 0.0);
    const double n = static_cast<double>(spec.trials);
    for (std::size_t g = 0; g < ng; ++g) {
        double s = 0.0;
        for (std::size_t t = 0; t < spec.trials; ++t)
            s += per_trial[t][g];
        const double mean = s / n;
        double v = 0.0;
        for (std::size_t t = 0; t < spec.trials; ++t)
            v += (per_trial[t][g] - mean) * (per_trial[t][g] - mean);
        res.mean_R[g] = mean;
        res.stderr_R[g] = spec.trials > 1 ? std::sqrt(v / (n - 1.0) / n) : 0.0;
    }
    return res;
}

cd eit_transmission(const ModeSet& modes, double delta, double omega_c, double gamma)
{
    const double w = 0.25 * omega_c * omega_c;
    const cd num = delta * (delta + I * gamma) - w;
    cd t = 1.0;
    for (Eigen::Index j = 0; j < modes.eigenvalues.size(); ++j) {
        const cd lambda = -modes.eigenvalues(j);
        t *= num / (delta * (delta + I * gamma + lambda) - w);
    }
    return t;
}

cd eit_keff(const ModeSet& modes, double delta, double omega_c, double gamma)
{
    if (!(omega_c > 0.0))
        throw DomainError("eit_keff: control field must be positive");
    const double o2 = omega_c * omega_c;
    const double N = static_cast<double>(modes.size());
    cd acc = 0.0;
    for (Eigen::Index j = 0; j < modes.eigenvalues.size(); ++j) {
        const cd lambda = -modes.eigenvalues(j);
        acc += 4.0 * lambda / o2 * (delta + 2.0 * delta * delta / o2 * (lambda + 2.0 * I * gamma));
    }
    return -I / N * acc;
}

double group_velocity(double omega_c, double gamma1d, double d)
{
    return omega_c * omega_c * d / (4.0 * gamma1d);
}

}  // namespace wqed
