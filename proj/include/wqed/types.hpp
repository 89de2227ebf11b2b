#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace wqed {

using cd = std::complex<double>;

inline constexpr cd I{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;
// divergences (perfect bunching, t = 0 points) are reported as +inf
inline constexpr double divergent = std::numeric_limits<double>::infinity();

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// raised when a resolvent is evaluated on (or within tolerance of) a pole
class SingularError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}
    double estimate() const { return estimate_; }

private:
    double estimate_;
};

// Positions of an ordered 1D array expressed as optical phases theta_m = omega0 z_m / c.
struct AtomChain {
    std::vector<double> phases;

    std::size_t size() const { return phases.size(); }
    void validate() const;

    static AtomChain periodic(std::size_t n, double phi);
};

struct Coupling {
    double gamma1d = 1.0;
    double gamma_nr = 0.0;
    double gamma_right = 0.5;
    double gamma_left = 0.5;
    double anharmonicity_u = std::numeric_limits<double>::infinity();
    double gamma_over_omega0 = 0.0;
    bool markovian = true;

    void validate() const;
    double xi() const { return gamma_left / gamma_right; }
    double beta() const { return gamma1d / (gamma1d + gamma_nr); }
    bool symmetric() const { return gamma_right == gamma_left; }

    static Coupling symmetric_rates(double gamma1d, double gamma_nr = 0.0);
    static Coupling directional(double gamma_right, double gamma_left, double gamma_nr = 0.0);
};

}  // namespace wqed
