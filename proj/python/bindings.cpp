#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wqed/chiral.hpp"
#include "wqed/config.hpp"
#include "wqed/lattice2d.hpp"
#include "wqed/modes.hpp"
#include "wqed/protocols.hpp"
#include "wqed/spectra1d.hpp"
#include "wqed/twophoton.hpp"

namespace py = pybind11;
using namespace wqed;

namespace {

Geometry geometry(const std::string& g)
{
    if (g == "transmit")
        return Geometry::transmit;
    if (g == "reflect")
        return Geometry::reflect;
    throw DomainError("geometry must be 'transmit' or 'reflect'");
}

ChiralMethod chiral_method(const std::string& m)
{
    if (m == "residue")
        return ChiralMethod::residue;
    if (m == "contour")
        return ChiralMethod::contour;
    if (m == "asymptotic")
        return ChiralMethod::asymptotic;
    throw DomainError("method must be 'residue', 'contour' or 'asymptotic'");
}

LatticeMethod lattice_method(const std::string& m)
{
    if (m == "direct")
        return LatticeMethod::direct;
    if (m == "reciprocal")
        return LatticeMethod::reciprocal;
    if (m == "closed_form")
        return LatticeMethod::closed_form;
    throw DomainError("method must be 'direct', 'reciprocal' or 'closed_form'");
}

LatticeSpec lattice_spec(double a, double gamma0, double gamma_nr, const std::string& method)
{
    LatticeSpec s;
    s.spacing_over_lambda = a;
    s.gamma0 = gamma0;
    s.gamma_nr = gamma_nr;
    s.method = lattice_method(method);
    return s;
}

}  // namespace

PYBIND11_MODULE(_wqed, m)
{
    m.doc() = "waveguide QED toolkit";
    m.attr("__version__") = cli::library_version();

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Coupling>(m, "Coupling")
        .def(py::init([](double gamma1d, double gamma_nr) { return Coupling::symmetric_rates(gamma1d, gamma_nr); }),
             py::arg("gamma1d") = 1.0, py::arg("gamma_nr") = 0.0)
        .def_static("directional", &Coupling::directional, py::arg("gamma_right"), py::arg("gamma_left"),
                    py::arg("gamma_nr") = 0.0)
        .def_readwrite("gamma1d", &Coupling::gamma1d)
        .def_readwrite("gamma_nr", &Coupling::gamma_nr)
        .def_readwrite("gamma_right", &Coupling::gamma_right)
        .def_readwrite("gamma_left", &Coupling::gamma_left)
        .def_readwrite("markovian", &Coupling::markovian)
        .def_readwrite("gamma_over_omega0", &Coupling::gamma_over_omega0);

    py::class_<AtomChain>(m, "AtomChain")
        .def(py::init([](std::vector<double> phases) { return AtomChain{std::move(phases)}; }), py::arg("phases"))
        .def_static("periodic", &AtomChain::periodic, py::arg("n"), py::arg("phi"))
        .def_readwrite("phases", &AtomChain::phases)
        .def("__len__", &AtomChain::size);

    m.def("effective_hamiltonian",
          [](const AtomChain& ch, const Coupling& c) { return effective_hamiltonian(ch, c); });
    m.def("eigenmodes", [](const AtomChain& ch, const Coupling& c) {
        const ModeSet s = eigenmodes(effective_hamiltonian(ch, c));
        return py::make_tuple(CVector(s.eigenvalues), CMatrix(s.eigenvectors));
    });

    m.def("chain_rt", [](const AtomChain& ch, const Coupling& c, double omega) {
        const RT x = chain_rt(ch, c, omega);
        return py::make_tuple(x.r, x.t);
    });
    m.def("dicke_rt", [](std::size_t n, double omega, const Coupling& c) {
        const RT x = dicke_rt(n, omega, c);
        return py::make_tuple(x.r, x.t);
    });

    m.def("g2_tau_dicke",
          [](double eps, double tau, const std::string& geo, std::size_t n, const Coupling& c) {
              return g2_tau_dicke(eps, tau, geometry(geo), n, c);
          },
          py::arg("eps"), py::arg("tau"), py::arg("geometry"), py::arg("n"), py::arg("coupling"));
    m.def("g2_zero_resonant",
          [](std::size_t n, double gamma1d, double gamma_nr, const std::string& geo) {
              return g2_zero_resonant(n, gamma1d, gamma_nr, geometry(geo));
          });
    m.def("g2_chain_chiral",
          [](std::size_t n, double gamma_nr, double gamma_right, const std::string& method) {
              return g2_chain_chiral({n, gamma_right, gamma_nr, chiral_method(method)});
          },
          py::arg("n"), py::arg("gamma_nr"), py::arg("gamma_right") = 1.0, py::arg("method") = "residue");
    m.def("chiral_n_star", &chiral_n_star, py::arg("gamma_nr"), py::arg("gamma_right") = 1.0);

    m.def("interaction_constant",
          [](double a, const std::string& method) { return interaction_constant(lattice_spec(a, 1.0, 0.0, method)); },
          py::arg("a_over_lambda"), py::arg("method") = "reciprocal");
    m.def("collective_params",
          [](double a, double gamma0, double gamma_nr) {
              const CollectiveParams p = collective_params(lattice_spec(a, gamma0, gamma_nr, "reciprocal"));
              return py::make_tuple(p.lamb_shift, p.gamma_2d);
          },
          py::arg("a_over_lambda"), py::arg("gamma0") = 1.0, py::arg("gamma_nr") = 0.0);

    m.def("run_ghz", [](std::size_t n, const std::string& ch) {
        const GhzOutcome g = run_ghz(n, ch == "up" ? Channel::up : Channel::down);
        return py::make_tuple(CVector(g.qubits), g.probability, fidelity(g.qubits, ghz_target(n, ch == "up" ? Channel::up : Channel::down)));
    });
    m.def("run_state_transfer", [](cd cp, cd cm) { return CVector(run_state_transfer(cp, cm)); });

    // whole-run entry point: a JSON configuration in, the rendered CSV or JSON text out
    m.def("run_config", [](const std::string& text, unsigned threads) {
        const cli::RunConfig cfg = cli::parse_config(nlohmann::json::parse(text));
        return cli::render(cfg, cli::run(cfg, threads));
    }, py::arg("config"), py::arg("threads") = 1);
}
