#pragma once

#include <string>
#include <vector>

#include "wqed/modes.hpp"
#include "wqed/spectra1d.hpp"
#include "wqed/types.hpp"

namespace wqed {

enum class Geometry { transmit, reflect };

enum class PairClass { scattering, fermionized, bound, localized, unclassified };

std::string to_string(PairClass c);

struct PairState {
    cd energy;              // eps, half of the pair energy
    CMatrix amplitude;      // symmetric, zero diagonal, sum psi^2 = 1
    std::vector<double> kgrid;
    std::vector<double> kmap;
    PairClass label = PairClass::unclassified;
    double overlap = 0.0;   // best ansatz overlap behind the label
};

// Two-photon kernel M(w1', w2' <- w1, w2) for N atoms at one point. Energy conservation
// w1' + w2' = w1 + w2 is the caller's responsibility.
cd kernel_dicke(cd w1p, cd w2p, cd w1, cd w2, std::size_t n, const Coupling& c);
// incident pair at eps, outgoing pair at (eps - w, eps + w)
cd kernel_dicke(double w, double eps, std::size_t n, const Coupling& c);

// closed-form result of the Bethe ansatz solution (no nonradiative loss)
cd bethe_oracle(cd w1p, cd w2p, cd w1, cd w2, std::size_t n, double gamma1d);

// amplitude of the bound two-photon eigenstate; c = 1, positions in units of c / gamma1d
cd bound_pair_amplitude(double x1, double x2, double eps, std::size_t n, double gamma1d);

// Sigma_mn = i [(H x 1 + 1 x H - 2 eps)^-1]_{mm,nn}
CMatrix sigma_pair(const CMatrix& h, cd eps);
// Q = Sigma^-1 for infinite u, otherwise -iU (1 - iU Sigma)^-1
CMatrix q_matrix(const CMatrix& sigma, double u);

// Precomputed pieces of the general-geometry kernel at fixed incident energy.
class PairKernel {
public:
    PairKernel(const AtomChain& chain, const Coupling& c, double eps);

    // M_{mu nu}(w1', 2 eps - w1'), mu/nu = +1 transmitted, -1 reflected
    cd operator()(cd w1p, int mu, int nu) const;
    double eps() const { return eps_; }
    const ModeSet& modes() const { return modes_; }
    // s vector for the given output direction at frequency w
    CVector s_out(cd w, int dir) const;

    // int dw/2pi exp(-i w tau) M_{mu mu}(eps - w, eps + w) by residues
    cd fourier_residue(double tau, int mu) const;
    bool residues_usable() const { return residues_ok_; }

private:
    AtomChain chain_;
    Coupling c_;
    double eps_;
    CMatrix h_;
    ModeSet modes_;
    CVector w_;     // Q s^+(eps)^2
    bool residues_ok_ = false;
};

cd kernel_general(const AtomChain& chain, const Coupling& c, double eps, cd w1p, int mu, int nu);

enum class G2Method { automatic, residue, quadrature };

// Correlation of the output photons for a weak coherent drive at eps.
// Returns +inf when the single-photon amplitude vanishes.
double g2_tau(double eps, double tau, Geometry geo, const AtomChain& chain, const Coupling& c,
              G2Method method = G2Method::automatic);
// d = 0 arrays of n atoms, analytic
double g2_tau_dicke(double eps, double tau, Geometry geo, std::size_t n, const Coupling& c);

// resonant equal-time closed forms, rates in any common unit
double g2_zero_resonant(std::size_t n, double gamma1d, double gamma, Geometry geo);

struct CoherentCorrections {
    double T_coh;
    double R_coh;
    double I_incoh;
};

// d = 0 array, first order in the incident power alpha^2 c / L
CoherentCorrections coherent_corrections(double eps, double alpha2_over_l, std::size_t n,
                                         const Coupling& c);

// numerical check of the incoherent rate, integrates |M|^2 over the outgoing splitting
double incoherent_rate_numeric(double eps, double alpha2_over_l, std::size_t n, const Coupling& c);

// Hard-core two-excitation eigenstates, sorted by decay rate (darkest last).
std::vector<PairState> pair_eigenstates(const CMatrix& h, bool classify = true);

// ansatz overlaps used by the classifier
double fermionic_overlap(const CMatrix& psi, int j1, int j2);
double best_fermionic_overlap(const CMatrix& psi, int* j1 = nullptr, int* j2 = nullptr);
double best_bosonic_overlap(const CMatrix& psi);
double best_bound_overlap(const CMatrix& psi);
double participation_ratio(const CMatrix& psi);

}  // namespace wqed
