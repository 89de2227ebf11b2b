#include "wqed/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <random>
#include <thread>

#include "wqed/chiral.hpp"
#include "wqed/lattice2d.hpp"
#include "wqed/modes.hpp"
#include "wqed/protocols.hpp"
#include "wqed/spectra1d.hpp"
#include "wqed/twophoton.hpp"

#ifndef WQED_VERSION
#define WQED_VERSION "unknown"
#endif

namespace wqed::cli {

using nlohmann::json;

std::string library_version() { return WQED_VERSION; }

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0.0)
        return "0";   // drops the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<double> GridSpec::values() const
{
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(points - 1);
        if (scale == "log")
            v[i] = min * std::pow(max / min, f);
        else
            v[i] = min + (max - min) * f;
    }
    if (points > 0)
        v.back() = max;
    return v;
}

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c{"spectrum", "modes", "dispersion", "g2",
                                            "pairstates", "lattice2d", "protocol"};
    return c;
}

namespace {

// Reads one JSON object, remembering which keys were consumed so leftovers can be rejected.
class Reader {
public:
    Reader(const json& j, std::string ctx) : j_(j), ctx_(std::move(ctx))
    {
        if (!j_.is_object())
            throw SchemaError(ctx_ + ": must be an object");
    }

    bool has(const std::string& k) const { return j_.contains(k); }
    void mark(const std::string& k) { used_.insert(k); }
    std::string field(const std::string& k) const { return ctx_ + "." + k; }

    double number(const std::string& k, std::optional<double> def = std::nullopt)
    {
        used_.insert(k);
        if (!j_.contains(k)) {
            if (!def)
                throw SchemaError(field(k) + ": required");
            return *def;
        }
        const json& v = j_.at(k);
        if (!v.is_number())
            throw SchemaError(field(k) + ": must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            throw SchemaError(field(k) + ": must be finite");
        return x;
    }

    double rate(const std::string& k, std::optional<double> def = std::nullopt)
    {
        const double x = number(k, def);
        if (x < 0.0)
            throw SchemaError(field(k) + ": rates must be >= 0");
        return x;
    }

    std::size_t count(const std::string& k, std::optional<std::size_t> def = std::nullopt,
                      std::size_t lo = 0)
    {
        used_.insert(k);
        std::size_t x;
        if (!j_.contains(k)) {
            if (!def)
                throw SchemaError(field(k) + ": required");
            x = *def;
        } else {
            const json& v = j_.at(k);
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw SchemaError(field(k) + ": must be a non-negative integer");
            x = v.get<std::size_t>();
        }
        if (x < lo)
            throw SchemaError(field(k) + ": must be >= " + std::to_string(lo));
        return x;
    }

    std::string choice(const std::string& k, const std::vector<std::string>& allowed,
                       std::optional<std::string> def = std::nullopt)
    {
        used_.insert(k);
        std::string s;
        if (!j_.contains(k)) {
            if (!def)
                throw SchemaError(field(k) + ": required");
            s = *def;
        } else {
            if (!j_.at(k).is_string())
                throw SchemaError(field(k) + ": must be a string");
            s = j_.at(k).get<std::string>();
        }
        if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed)
                list += (list.empty() ? "" : "|") + a;
            throw SchemaError(field(k) + ": expected one of " + list);
        }
        return s;
    }

    bool flag(const std::string& k, bool def)
    {
        used_.insert(k);
        if (!j_.contains(k))
            return def;
        if (!j_.at(k).is_boolean())
            throw SchemaError(field(k) + ": must be true or false");
        return j_.at(k).get<bool>();
    }

    std::vector<double> numbers(const std::string& k)
    {
        used_.insert(k);
        const json& v = j_.at(k);
        if (!v.is_array() || v.empty())
            throw SchemaError(field(k) + ": must be a non-empty array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number())
                throw SchemaError(field(k) + ": must be a non-empty array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    // a number or [re, im]
    cd complex(const std::string& k)
    {
        used_.insert(k);
        if (!j_.contains(k))
            throw SchemaError(field(k) + ": required");
        const json& v = j_.at(k);
        if (v.is_number())
            return v.get<double>();
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return {v[0].get<double>(), v[1].get<double>()};
        throw SchemaError(field(k) + ": must be a number or [re, im]");
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key()))
                throw SchemaError(field(it.key()) + ": unknown field");
    }

private:
    const json& j_;
    std::string ctx_;
    std::set<std::string> used_;
};

using Job = std::function<Table(unsigned)>;

Coupling read_coupling(Reader& p)
{
    const double gnr = p.rate("gamma_nr", 0.0);
    Coupling c;
    if (p.has("gamma_right") || p.has("gamma_left")) {
        if (p.has("gamma1d") || p.has("xi"))
            throw SchemaError(p.field("gamma_right") + ": give either gamma1d/xi or gamma_right/gamma_left");
        c = Coupling::directional(p.rate("gamma_right"), p.rate("gamma_left"), gnr);
    } else {
        const double g = p.rate("gamma1d", 1.0);
        const double xi = p.rate("xi", 1.0);
        const double gr = g / (1.0 + xi);
        c = Coupling::directional(gr, xi * gr, gnr);
        c.gamma1d = g;
    }
    c.markovian = p.flag("markovian", true);
    c.gamma_over_omega0 = p.rate("gamma_over_omega0", 0.0);
    if (p.has("anharmonicity_u"))
        c.anharmonicity_u = p.rate("anharmonicity_u");
    try {
        c.validate();
    } catch (const DomainError& e) {
        throw SchemaError(p.field("coupling") + ": " + e.what());
    }
    return c;
}

AtomChain read_chain(Reader& p, std::size_t min_atoms = 0)
{
    AtomChain ch;
    if (p.has("phases")) {
        ch.phases = p.numbers("phases");
        for (std::size_t i = 1; i < ch.phases.size(); ++i)
            if (ch.phases[i] < ch.phases[i - 1])
                throw SchemaError(p.field("phases") + ": must be non-decreasing");
    } else {
        const std::size_t n = p.count("n", std::nullopt, min_atoms);
        ch = AtomChain::periodic(n, p.number("phi"));
    }
    if (ch.size() < min_atoms)
        throw SchemaError(p.field("n") + ": at least " + std::to_string(min_atoms) + " atom(s) needed");
    return ch;
}

const GridSpec& need_grid(const RunConfig& cfg)
{
    if (!cfg.grid)
        throw SchemaError("grid: required for " + cfg.command);
    return *cfg.grid;
}

void forbid_grid(const RunConfig& cfg, const std::string& what)
{
    if (cfg.grid)
        throw SchemaError("grid: not used by " + what);
}

// evaluates f(i) for every grid index, threads take strided indices, results kept in order
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F f)
{
    std::vector<T> out(n);
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (nt == 1) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = f(i);
        return out;
    }
    std::vector<std::exception_ptr> errs(nt);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += nt)
                    out[i] = f(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errs)
        if (e)
            std::rethrow_exception(e);
    return out;
}

std::vector<Cell> rt_row(double x, cd r, cd t)
{
    const double R = std::norm(r), T = std::norm(t);
    return {x, r.real(), r.imag(), t.real(), t.imag(), R, T, 1.0 - R - T};
}

const std::vector<std::string> rt_columns{"detuning", "re_r", "im_r", "re_t", "im_t", "R", "T", "loss"};

Job plan_spectrum(const RunConfig& cfg)
{
    Reader p(cfg.params, "params");
    const std::string model = p.choice("model", {"chain", "dicke", "ensemble", "eit"}, "chain");
    const std::vector<double> grid = need_grid(cfg).values();
    if (model == "chain") {
        const AtomChain ch = read_chain(p);
        const Coupling c = read_coupling(p);
        p.finish();
        return [=](unsigned threads) {
            Table t;
            t.columns = rt_columns;
            t.rows = parallel_map<std::vector<Cell>>(grid.size(), threads, [&](std::size_t i) {
                const SpectralResult s = chain_spectrum(ch, c, {grid[i]});
                return rt_row(grid[i], s.r[0], s.t_fwd[0]);
            });
            return t;
        };
    }
    if (model == "dicke") {
        const std::size_t n = p.count("n", std::nullopt, 1);
        const Coupling c = read_coupling(p);
        p.finish();
        if (!c.symmetric())
            throw SchemaError("params.xi: dicke model needs symmetric coupling");
        return [=](unsigned threads) {
            Table t;
            t.columns = rt_columns;
            t.rows = parallel_map<std::vector<Cell>>(grid.size(), threads, [&](std::size_t i) {
                const RT x = dicke_rt(n, grid[i], c);
                return rt_row(grid[i], x.r, x.t);
            });
            return t;
        };
    }
    if (model == "ensemble") {
        EnsembleSpec es;
        es.sites = p.count("sites", std::nullopt, 1);
        es.fill = p.number("fill");
        if (es.fill < 0.0 || es.fill > 1.0)
            throw SchemaError("params.fill: must lie in [0, 1]");
        es.trials = p.count("trials", std::nullopt, 1);
        es.phi = p.number("phi", pi);
        es.coupling = read_coupling(p);
        p.finish();
        es.seed = cfg.seed.value_or(0);
        return [=](unsigned threads) {
            EnsembleSpec s = es;
            s.threads = threads;
            const EnsembleResult r = ensemble_bragg_reflectance(s, grid);
            Table t;
            t.columns = {"detuning", "mean_R", "stderr_R"};
            for (std::size_t i = 0; i < grid.size(); ++i)
                t.rows.push_back({grid[i], r.mean_R[i], r.stderr_R[i]});
            return t;
        };
    }
    // eit
    const AtomChain ch = read_chain(p, 1);
    const Coupling c = read_coupling(p);
    const double omega_c = p.number("omega_c");
    const double gamma = p.rate("gamma", 0.0);
    p.finish();
    if (!(omega_c > 0.0))
        throw SchemaError("params.omega_c: must be positive");
    return [=](unsigned) {
        const ModeSet m = eigenmodes(effective_hamiltonian(ch, c));
        Table t;
        t.columns = {"detuning", "re_t", "im_t", "T"};
        for (double w : grid) {
            const cd x = eit_transmission(m, w, omega_c, gamma);
            t.rows.push_back({w, x.real(), x.imag(), std::norm(x)});
        }
        return t;
    };
}

Job plan_modes(const RunConfig& cfg)
{
    forbid_grid(cfg, "modes");
    Reader p(cfg.params, "params");
    const AtomChain ch = read_chain(p, 1);
    const Coupling c = read_coupling(p);
    const bool dump = p.flag("dump_vectors", false);
    p.finish();
    return [=](unsigned) {
        const ModeSet m = eigenmodes(effective_hamiltonian(ch, c));
        Table t;
        t.columns = {"index", "re_omega", "im_omega", "dominant_k"};
        cd sum = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const cd w = m.eigenvalues(static_cast<Eigen::Index>(i));
            sum += w;
            t.rows.push_back({static_cast<double>(i), w.real(), w.imag(), m.bloch_k[i]});
        }
        const double expect = -static_cast<double>(ch.size()) * (c.gamma_right + c.gamma_left + c.gamma_nr);
        t.footer = {{"trace_re", sum.real()}, {"trace_im", sum.imag()}, {"trace_expected_im", expect}};
        if (dump) {
            json vecs = json::array();
            for (Eigen::Index k = 0; k < m.eigenvectors.cols(); ++k) {
                json col = json::array();
                for (Eigen::Index i = 0; i < m.eigenvectors.rows(); ++i)
                    col.push_back({m.eigenvectors(i, k).real(), m.eigenvectors(i, k).imag()});
                vecs.push_back(col);
            }
            t.extra["eigenvectors"] = vecs;
        }
        return t;
    };
}

Job plan_dispersion(const RunConfig& cfg)
{
    Reader p(cfg.params, "params");
    const std::string model = p.choice("model", {"guided", "freespace", "chiral", "bragg"}, "guided");
    if (model == "bragg") {
        forbid_grid(cfg, "dispersion model bragg");
        const double phi = p.number("phi", pi);
        const double g = p.rate("gamma1d", 1.0);
        const double ratio = p.rate("gamma_over_omega0");
        const int order = static_cast<int>(p.count("order", 1, 1));
        p.finish();
        return [=](unsigned) {
            const BandInfo b = band_and_bragg(phi, g, ratio, order);
            Table t;
            t.columns = {"gap_lo", "gap_hi", "delta_bragg", "delta_bragg_over_omega0", "n_star"};
            t.rows.push_back({b.gap_valid ? b.gap_lo : std::nan(""), b.gap_valid ? b.gap_hi : std::nan(""),
                              b.delta_bragg, b.delta_bragg_over_omega0, b.n_star});
            return t;
        };
    }
    const std::vector<double> grid = need_grid(cfg).values();
    if (model == "guided") {
        const double phi = p.number("phi");
        const double g = p.rate("gamma1d", 1.0);
        const double gamma = p.rate("gamma_nr", 0.0);
        p.finish();
        return [=](unsigned) {
            Table t;
            t.columns = {"omega", "re_kd", "im_kd"};
            for (double w : grid) {
                const cd k = dispersion_guided(w, phi, g, 0.0, gamma);
                t.rows.push_back({w, k.real(), k.imag()});
            }
            return t;
        };
    }
    if (model == "freespace") {
        const double d = p.number("d_over_lambda0");
        const double g0 = p.rate("gamma0", 1.0);
        p.finish();
        if (!(d > 0.0 && d < 0.5))
            throw SchemaError("params.d_over_lambda0: must lie in (0, 0.5)");
        return [=](unsigned threads) {
            Table t;
            t.columns = {"kd", "shift"};
            t.rows = parallel_map<std::vector<Cell>>(grid.size(), threads, [&](std::size_t i) {
                return std::vector<Cell>{grid[i], dispersion_freespace(grid[i], d, g0)};
            });
            return t;
        };
    }
    const double xi = p.rate("xi");
    const double phi = p.number("phi");
    const double g = p.rate("gamma1d", 1.0);
    p.finish();
    return [=](unsigned) {
        Table t;
        t.columns = {"kd", "re_omega", "im_omega"};
        for (double k : grid) {
            const cd w = dispersion_chiral(k, xi, phi, g);
            t.rows.push_back({k, w.real(), w.imag()});
        }
        return t;
    };
}

Geometry read_geometry(Reader& p)
{
    return p.choice("geometry", {"transmit", "reflect"}, "transmit") == "transmit" ? Geometry::transmit
                                                                                   : Geometry::reflect;
}

Job plan_g2(const RunConfig& cfg)
{
    Reader p(cfg.params, "params");
    const std::string model = p.choice("model", {"dicke", "chain", "zero", "chiral"}, "dicke");
    if (model == "dicke" || model == "chain") {
        const std::vector<double> taus = need_grid(cfg).values();
        const Geometry geo = read_geometry(p);
        const double eps = p.number("eps", 0.0);
        if (model == "dicke") {
            const std::size_t n = p.count("n", std::nullopt, 1);
            const Coupling c = read_coupling(p);
            p.finish();
            return [=](unsigned threads) {
                Table t;
                t.columns = {"tau", "g2"};
                t.rows = parallel_map<std::vector<Cell>>(taus.size(), threads, [&](std::size_t i) {
                    return std::vector<Cell>{taus[i], g2_tau_dicke(eps, taus[i], geo, n, c)};
                });
                return t;
            };
        }
        const AtomChain ch = read_chain(p, 1);
        const Coupling c = read_coupling(p);
        const std::string m = p.choice("method", {"automatic", "residue", "quadrature"}, "automatic");
        p.finish();
        const G2Method gm = m == "residue" ? G2Method::residue
                            : m == "quadrature" ? G2Method::quadrature
                                                : G2Method::automatic;
        return [=](unsigned threads) {
            Table t;
            t.columns = {"tau", "g2"};
            t.rows = parallel_map<std::vector<Cell>>(taus.size(), threads, [&](std::size_t i) {
                return std::vector<Cell>{taus[i], g2_tau(eps, taus[i], geo, ch, c, gm)};
            });
            return t;
        };
    }
    forbid_grid(cfg, "g2 N sweeps");
    const std::size_t n_min = p.count("n_min", 1, 1);
    const std::size_t n_max = p.count("n_max", n_min, n_min);
    if (model == "zero") {
        const Geometry geo = read_geometry(p);
        const double g = p.rate("gamma1d", 1.0);
        const double gamma = p.rate("gamma_nr", 0.0);
        p.finish();
        return [=](unsigned) {
            Table t;
            t.columns = {"n", "g2"};
            for (std::size_t n = n_min; n <= n_max; ++n)
                t.rows.push_back({static_cast<double>(n), g2_zero_resonant(n, g, gamma, geo)});
            return t;
        };
    }
    ChiralG2Request base;
    base.gamma_right = p.rate("gamma_right", 1.0);
    base.gamma_nr = p.rate("gamma_ratio") * base.gamma_right;
    const std::string m = p.choice("method", {"residue", "contour", "asymptotic"}, "residue");
    p.finish();
    if (!(base.gamma_right > 0.0))
        throw SchemaError("params.gamma_right: must be positive");
    base.method = m == "contour" ? ChiralMethod::contour
                  : m == "asymptotic" ? ChiralMethod::asymptotic
                                      : ChiralMethod::residue;
    if (base.method == ChiralMethod::asymptotic && !(base.gamma_nr > 0.0))
        throw SchemaError("params.gamma_ratio: asymptotic method needs a positive ratio");
    return [=](unsigned threads) {
        const Precision prec = precision_from_env();
        Table t;
        t.columns = {"n", "g2"};
        t.rows = parallel_map<std::vector<Cell>>(n_max - n_min + 1, threads, [&](std::size_t i) {
            ChiralG2Request q = base;
            q.n_atoms = n_min + i;
            return std::vector<Cell>{static_cast<double>(q.n_atoms), g2_chain_chiral(q, prec)};
        });
        if (base.gamma_nr > 0.0)
            t.footer = {{"n_star", chiral_n_star(base.gamma_nr, base.gamma_right)}};
        return t;
    };
}

Job plan_pairstates(const RunConfig& cfg)
{
    forbid_grid(cfg, "pairstates");
    Reader p(cfg.params, "params");
    const AtomChain ch = read_chain(p, 2);
    const Coupling c = read_coupling(p);
    const bool classify = p.flag("classify", true);
    const std::size_t limit = p.count("max_states", 0);
    p.finish();
    return [=](unsigned) {
        const std::vector<PairState> ps = pair_eigenstates(effective_hamiltonian(ch, c), classify);
        Table t;
        t.columns = {"index", "re_eps", "im_eps", "label", "overlap"};
        const std::size_t n = limit == 0 ? ps.size() : std::min(limit, ps.size());
        // darkest states sit at the end of the list; keep them when truncating
        for (std::size_t i = ps.size() - n; i < ps.size(); ++i)
            t.rows.push_back({static_cast<double>(i), ps[i].energy.real(), ps[i].energy.imag(),
                              to_string(ps[i].label), ps[i].overlap});
        return t;
    };
}

LatticeSpec read_lattice(Reader& p)
{
    LatticeSpec s;
    const std::string m = p.choice("method", {"direct", "reciprocal", "closed_form"}, "reciprocal");
    s.method = m == "direct" ? LatticeMethod::direct
               : m == "closed_form" ? LatticeMethod::closed_form
                                    : LatticeMethod::reciprocal;
    s.gamma0 = p.rate("gamma0", 1.0);
    s.gamma_nr = p.rate("gamma_nr", 0.0);
    s.radius = p.number("radius", s.radius);
    if (p.has("z_sequence"))
        s.z_sequence = p.numbers("z_sequence");
    return s;
}

Job plan_lattice2d(const RunConfig& cfg)
{
    Reader p(cfg.params, "params");
    const std::string model = p.choice("model", {"sweep", "metasurface"}, "sweep");
    LatticeSpec base = read_lattice(p);
    const std::vector<double> grid = need_grid(cfg).values();
    if (model == "metasurface") {
        base.spacing_over_lambda = p.number("spacing_over_lambda");
        p.finish();
        try {
            base.validate();
        } catch (const DomainError& e) {
            throw SchemaError(std::string("params: ") + e.what());
        }
        return [=](unsigned) {
            Table t;
            t.columns = rt_columns;
            const CollectiveParams cp = collective_params(base);
            for (double w : grid) {
                const cd r = I * cp.gamma_2d / (cp.lamb_shift - w - I * (base.gamma_nr + cp.gamma_2d));
                t.rows.push_back(rt_row(w, r, 1.0 + r));
            }
            const RT r0 = metasurface_rt(base, 0.0);
            t.footer = {{"lamb_shift", cp.lamb_shift}, {"gamma_2d", cp.gamma_2d}, {"abs_r_omega0", std::abs(r0.r)}};
            return t;
        };
    }
    p.finish();
    for (double a : grid)
        if (!(a > 0.0 && a < 1.0))
            throw SchemaError("grid: a/lambda0 values must lie in (0, 1)");
    return [=](unsigned threads) {
        Table t;
        t.columns = {"a_over_lambda0", "re_C", "im_C", "lamb_shift", "gamma_2d", "abs_r_omega0"};
        t.rows = parallel_map<std::vector<Cell>>(grid.size(), threads, [&](std::size_t i) {
            LatticeSpec s = base;
            s.spacing_over_lambda = grid[i];
            const cd c = interaction_constant(s);
            const CollectiveParams cp = collective_params(s);
            const RT r0 = metasurface_rt(s, 0.0);
            return std::vector<Cell>{grid[i], c.real(), c.imag(), cp.lamb_shift, cp.gamma_2d, std::abs(r0.r)};
        });
        return t;
    };
}

std::string channel_name(Channel c) { return c == Channel::down ? "down" : "up"; }

Job plan_protocol(const RunConfig& cfg)
{
    forbid_grid(cfg, "protocol");
    Reader p(cfg.params, "params");
    const std::string model = p.choice("model", {"ghz", "state_transfer"}, "ghz");
    if (model == "ghz") {
        const std::size_t n = p.count("n", std::nullopt, 2);
        const std::size_t shots = p.count("shots", 0);
        p.finish();
        if (n > max_protocol_qubits)
            throw SchemaError("params.n: at most 24 qubits");
        const std::uint64_t seed = cfg.seed.value_or(0);
        return [=](unsigned) {
            Table t;
            t.columns = {"channel", "probability", "fidelity", "count"};
            const GhzOutcome down = run_ghz(n, Channel::down);
            const GhzOutcome up = run_ghz(n, Channel::up);
            // seeded sampler over the measured photon channel
            std::size_t n_up = 0;
            std::mt19937_64 rng(splitmix64(seed));
            for (std::size_t s = 0; s < shots; ++s)
                if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < up.probability)
                    ++n_up;
            for (Channel ch : {Channel::down, Channel::up}) {
                const GhzOutcome& o = ch == Channel::down ? down : up;
                const double cnt = static_cast<double>(ch == Channel::down ? shots - n_up : n_up);
                t.rows.push_back({channel_name(ch), o.probability, fidelity(o.qubits, ghz_target(n, ch)), cnt});
            }
            return t;
        };
    }
    const cd cp = p.complex("c_plus");
    const cd cm = p.complex("c_minus");
    p.finish();
    if (std::abs(std::norm(cp) + std::norm(cm) - 1.0) > 1e-12)
        throw SchemaError("params.c_plus: |c_plus|^2 + |c_minus|^2 must equal 1");
    return [=](unsigned) {
        const Qubit out = run_state_transfer(cp, cm);
        const Qubit want = plus_minus(cp, cm);
        Table t;
        t.columns = {"re_q0", "im_q0", "re_q1", "im_q1", "fidelity"};
        t.rows.push_back({out(0).real(), out(0).imag(), out(1).real(), out(1).imag(),
                          fidelity(CVector(out), CVector(want))});
        return t;
    };
}

Job plan(const RunConfig& cfg)
{
    if (cfg.command == "spectrum")
        return plan_spectrum(cfg);
    if (cfg.command == "modes")
        return plan_modes(cfg);
    if (cfg.command == "dispersion")
        return plan_dispersion(cfg);
    if (cfg.command == "g2")
        return plan_g2(cfg);
    if (cfg.command == "pairstates")
        return plan_pairstates(cfg);
    if (cfg.command == "lattice2d")
        return plan_lattice2d(cfg);
    if (cfg.command == "protocol")
        return plan_protocol(cfg);
    throw SchemaError("command: unknown command '" + cfg.command + "'");
}

}  // namespace

RunConfig parse_config(const json& j)
{
    Reader top(j, "config");
    RunConfig cfg;
    std::vector<std::string> allowed = commands();
    cfg.command = top.choice("command", allowed);
    if (j.contains("params")) {
        if (!j.at("params").is_object())
            throw SchemaError("params: must be an object");
        cfg.params = j.at("params");
    }
    if (j.contains("grid")) {
        Reader g(j.at("grid"), "grid");
        GridSpec gs;
        gs.min = g.number("min");
        gs.max = g.number("max");
        gs.points = g.count("points", std::nullopt, 2);
        gs.scale = g.choice("scale", {"linear", "log"}, "linear");
        g.finish();
        if (gs.scale == "log" && !(gs.min > 0.0 && gs.max > 0.0))
            throw SchemaError("grid.min: log grid needs positive bounds");
        cfg.grid = gs;
    }
    if (j.contains("output")) {
        Reader o(j.at("output"), "output");
        if (o.has("path")) {
            o.mark("path");
            if (!j.at("output").at("path").is_string())
                throw SchemaError("output.path: must be a string");
            cfg.output.path = j.at("output").at("path").get<std::string>();
        }
        cfg.output.format = o.choice("format", {"csv", "json"}, "csv");
        o.finish();
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw SchemaError("seed: must be a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::set<std::string> known{"command", "params", "grid", "output", "seed"};
        if (!known.count(it.key()))
            throw SchemaError("config." + it.key() + ": unknown field");
    }
    plan(cfg);   // validates the parameter block
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SchemaError("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& cfg)
{
    json j;
    j["command"] = cfg.command;
    j["params"] = cfg.params;
    if (cfg.grid)
        j["grid"] = {{"min", cfg.grid->min}, {"max", cfg.grid->max}, {"points", cfg.grid->points},
                     {"scale", cfg.grid->scale}};
    json out = {{"format", cfg.output.format}};
    if (!cfg.output.path.empty())
        out["path"] = cfg.output.path;
    j["output"] = out;
    if (cfg.seed)
        j["seed"] = *cfg.seed;
    return j;
}

namespace {

const std::string config_tag = "# config: ";

json cell_json(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
            return *d;
        return format_number(*d);   // JSON has no inf/nan literals
    }
    return std::get<std::string>(c);
}

std::string cell_text(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c))
        return format_number(*d);
    return std::get<std::string>(c);
}

}  // namespace

RunConfig config_from_output(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(config_tag, 0) == 0)
            return parse_config(json::parse(line.substr(config_tag.size())));
    // json output carries the config as a member
    const json j = json::parse(text);
    return parse_config(j.at("config"));
}

std::string render(const RunConfig& cfg, const Table& table)
{
    std::ostringstream os;
    if (cfg.output.format == "json") {
        json j;
        j["version"] = library_version();
        j["config"] = to_json(cfg);
        j["columns"] = table.columns;
        json rows = json::array();
        for (const auto& r : table.rows) {
            json row = json::array();
            for (const auto& c : r)
                row.push_back(cell_json(c));
            rows.push_back(row);
        }
        j["rows"] = rows;
        json foot = json::object();
        for (const auto& [k, v] : table.footer)
            foot[k] = cell_json(v);
        j["footer"] = foot;
        for (auto it = table.extra.begin(); table.extra.is_object() && it != table.extra.end(); ++it)
            j[it.key()] = it.value();
        os << j.dump(1) << '\n';
        return os.str();
    }
    os << "# wqed " << library_version() << '\n';
    os << config_tag << to_json(cfg).dump() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << cell_text(r[i]);
        os << '\n';
    }
    for (const auto& [k, v] : table.footer)
        os << "# " << k << " = " << cell_text(v) << '\n';
    return os.str();
}

void write_output(const RunConfig& cfg, const Table& table)
{
    if (cfg.output.path.empty())
        throw SchemaError("output.path: required (or pass --out)");
    std::ofstream out(cfg.output.path, std::ios::binary);
    if (!out)
        throw SchemaError("output.path: cannot write " + cfg.output.path);
    out << render(cfg, table);
}

Table run(const RunConfig& cfg, unsigned threads) { return plan(cfg)(std::max(1u, threads)); }

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ConvergenceError*>(&e))
        return 3;
    if (dynamic_cast<const DomainError*>(&e))
        return 2;
    return 1;
}

}  // namespace wqed::cli
