#pragma once

#include <vector>

#include "wqed/spectra1d.hpp"
#include "wqed/types.hpp"

namespace wqed {

enum class LatticeMethod { direct, reciprocal, closed_form };

// Infinite square lattice, dipoles along x, light at normal incidence.
// Lengths in units of the lattice constant a, so C comes out in units of 1/a^3.
struct LatticeSpec {
    double spacing_over_lambda = 0.2;   // a / lambda0
    double gamma0 = 1.0;
    double gamma_nr = 0.0;
    LatticeMethod method = LatticeMethod::reciprocal;
    double radius = 60.0;                                // direct sum, in units of a
    std::vector<double> z_sequence{0.02, 0.01, 0.005};   // reciprocal sum, in units of a

    void validate() const;
};

// C = sum over j != 0 of 4 pi k^2 G_xx(r_j) plus the self term 2ik^3/3,
// so Im C = 2 pi k exactly below the diffraction threshold.
// omega_ratio = omega / omega0 rescales k.
cd interaction_constant(const LatticeSpec& spec, double omega_ratio = 1.0);

// sum_{j != 0} 1/r^3 and the regularized sum_{j != 0} 1/r
double lattice_s();
double lattice_s_prime();

struct CollectiveParams {
    double lamb_shift;   // omega~0 - omega0
    double gamma_2d;
};

CollectiveParams collective_params(const LatticeSpec& spec);

// detuning = omega - omega0, same unit as gamma0
RT metasurface_rt(const LatticeSpec& spec, double detuning);
// same quantity from the renormalized single-atom polarizability
RT metasurface_rt_polarizability(const LatticeSpec& spec, double detuning);

}  // namespace wqed
