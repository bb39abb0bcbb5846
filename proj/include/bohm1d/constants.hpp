#ifndef BOHM1D_CONSTANTS_HPP
#define BOHM1D_CONSTANTS_HPP

#include <cmath>
#include <stdexcept>

namespace bohm1d {

// Physical scales shared by every formula in the library: hbar, the particle
// rest mass m0, and the speed limit c that the relativistic reflection
// coefficients refer to. Defaults are natural units hbar = m0 = c = 1;
// any consistent unit system works since nothing below assumes a scale.
struct PhysicalConstants {
    double hbar = 1.0;
    double m0 = 1.0;
    double c = 1.0;

    PhysicalConstants() = default;

    PhysicalConstants(double hbar_, double m0_, double c_)
        : hbar(hbar_), m0(m0_), c(c_) {
        if (!(hbar > 0.0) || !(m0 > 0.0) || !(c > 0.0))
            throw std::invalid_argument("PhysicalConstants: hbar, m0 and c must be positive");
    }

    // Speed of the incident plane wave, v0 = hbar k / m0.
    double v0_of_k(double k) const { return hbar * k / m0; }

    // Kinetic energy of the incident wave, E = hbar^2 k^2 / (2 m0) = m0 v0^2 / 2.
    double energy_of_k(double k) const { return hbar * k * (hbar * k) / (2.0 * m0); }

    double k_of_energy(double e) const {
        if (!(e > 0.0))
            throw std::domain_error("k_of_energy: energy must be positive");
        return std::sqrt(2.0 * m0 * e) / hbar;
    }

    // Rest energy m0 c^2, the floor of the massive coefficient's domain.
    double rest_energy() const { return m0 * c * c; }
};

} // namespace bohm1d

#endif
