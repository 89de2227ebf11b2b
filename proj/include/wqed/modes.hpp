#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "wqed/types.hpp"

namespace wqed {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct ModeSet {
    CVector eigenvalues;    // detunings from omega0, sorted by decay rate (largest first)
    CMatrix eigenvectors;   // column nu holds P^nu, normalised as sum_n P_n^2 = 1
    std::vector<double> bloch_k;          // dominant K d in (-pi, pi]
    std::vector<bool> near_degenerate;    // per mode, gap to a neighbour < 1e-10

    std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
    bool any_degenerate() const;
};

// Photon phase factor omega/omega0 at detuning `delta` (same units as gamma1d).
double photon_scale(const Coupling& c, double delta);
cd photon_scale(const Coupling& c, cd delta);

CMatrix effective_hamiltonian(const AtomChain& chain, const Coupling& c,
                              std::optional<cd> omega = std::nullopt);

ModeSet eigenmodes(const CMatrix& h);

CMatrix greens_matrix(const CMatrix& h, cd omega);

CMatrix tridiagonal_inverse_oracle(std::size_t n, double phi, double gamma1d = 1.0);

// cos Kd = cos phi + gamma1d sin phi / (omega - delta_omega + i gamma)
cd dispersion_guided(cd omega, double phi, double gamma1d, double delta_omega = 0.0,
                     double gamma = 0.0);
cd omega_of_k(cd kd, double phi, double gamma1d, double delta_omega = 0.0, double gamma = 0.0);

// Li_s(z) for s >= 1 and |z| <= 1
cd polylog(int s, cd z);

// Real frequency shift of a free-space chain with dipoles normal to the chain axis.
// gamma0 is the single-atom half width (H_nn = -i gamma0).
double dispersion_freespace(double kd, double d_over_lambda0, double gamma0 = 1.0);

// Bloch dispersion for directional couplings gamma_right = gamma1d/(1+xi), gamma_left = xi*gamma_right.
// Returns +inf at the Kd = +-phi poles.
cd dispersion_chiral(double kd, double xi, double phi, double gamma1d);

struct BandInfo {
    bool gap_valid = false;
    double gap_lo = 0.0;
    double gap_hi = 0.0;
    double delta_bragg = 0.0;          // in units of gamma1d
    double delta_bragg_over_omega0 = 0.0;
    double n_star = 0.0;
};

BandInfo band_and_bragg(double phi, double gamma1d, double gamma_over_omega0, int m = 1);

double subradiant_estimate(int nu, std::size_t n, double phi, double gamma1d);

}  // namespace wqed
