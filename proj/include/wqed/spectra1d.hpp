#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "wqed/modes.hpp"
#include "wqed/types.hpp"

namespace wqed {

struct AtomRT {
    cd r;
    cd t_fwd;
    cd t_bwd;
};

struct RT {
    cd r;
    cd t;
};

struct SpectralResult {
    std::vector<double> grid;
    std::vector<cd> r, t_fwd, t_bwd;
    std::vector<double> R, T, loss;
};

struct EnsembleSpec {
    std::size_t sites = 0;
    double fill = 1.0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    double phi = pi;       // lattice phase per site, omega0 d / c
    Coupling coupling;
    unsigned threads = 1;
};

struct EnsembleResult {
    std::vector<double> grid;
    std::vector<double> mean_R;
    std::vector<double> stderr_R;
};

using Matrix2c = Eigen::Matrix2cd;

AtomRT atom_rt(cd omega, const Coupling& c);

Matrix2c transfer_chain(const AtomChain& chain, const Coupling& c, double omega);
// det is the product determinant when known; forming it from the entries of a long
// product cancels catastrophically deep in a stop band
RT rt_from_transfer(const Matrix2c& m, std::optional<cd> det = std::nullopt);
cd transfer_determinant(std::size_t n, double omega, const Coupling& c);
RT chain_rt(const AtomChain& chain, const Coupling& c, double omega);

// closed form for N equally spaced atoms starting at z = 0 (symmetric coupling)
RT periodic_rt(std::size_t n, double phi, const Coupling& c, double omega);

RT dicke_rt(std::size_t n, double omega, const Coupling& c);

RT rt_from_green(const AtomChain& chain, const Coupling& c, double omega);

SpectralResult chain_spectrum(const AtomChain& chain, const Coupling& c,
                              const std::vector<double>& grid);

double optical_depth(cd t_resonant);

EnsembleResult ensemble_bragg_reflectance(const EnsembleSpec& spec, const std::vector<double>& grid);

// lambda_xi = -omega_xi taken from the eigenvalues of the guided-coupling Hamiltonian
cd eit_transmission(const ModeSet& modes, double delta, double omega_c, double gamma);
// series for k_eff * d through second order in delta
cd eit_keff(const ModeSet& modes, double delta, double omega_c, double gamma);
double group_velocity(double omega_c, double gamma1d, double d = 1.0);

// splitmix64 step, used to derive per-trial seeds
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace wqed
