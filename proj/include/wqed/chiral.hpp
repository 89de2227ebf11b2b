#pragma once

#include <cstddef>

#include "wqed/types.hpp"

namespace wqed {

struct DirectionalRates {
    double gamma_right;
    double gamma_left;
};

// Rates for a guided mode of quasi-circular polarization s in [-1, 1], normalised so
// gamma_right + gamma_left = gamma1d.
DirectionalRates directional_rates(double s, double gamma1d);

// t_N = t_1^N for a fully chiral chain (gamma_left = 0)
cd chiral_chain_t(std::size_t n, double omega, const Coupling& c);

// resonant g2(0) of one chirally coupled atom; +inf at gamma = gamma_right
double g2_single_chiral(double gamma_nr, double gamma_right);

enum class ChiralMethod { residue, contour, asymptotic };
enum class Precision { standard, extended };

struct ChiralG2Request {
    std::size_t n_atoms = 1;
    double gamma_right = 1.0;
    double gamma_nr = 0.0;
    ChiralMethod method = ChiralMethod::residue;
};

// Reads WQED_PRECISION (double | extended); extended when unset.
Precision precision_from_env();

// resonant g2(0) after N fully chiral atoms
double g2_chain_chiral(const ChiralG2Request& req, Precision prec);
double g2_chain_chiral(const ChiralG2Request& req);

// threshold atom number where g2(0) returns to one, gamma/gamma_right >> 1
double chiral_n_star(double gamma_nr, double gamma_right);

}  // namespace wqed
