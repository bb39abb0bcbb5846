#ifndef BOHM1D_RELATIVITY_HPP
#define BOHM1D_RELATIVITY_HPP

#include "bohm1d/constants.hpp"

#include <vector>

namespace bohm1d {

// Tolerance for the radicand of the massive reflection coefficient, in units
// of c^4. Values within this band below zero are treated as exactly zero so
// the domain boundary v0 = c sqrt(2) is reachable in floating point.
inline constexpr double radicand_eps = 1e-12;

// A particle described by its rest mass, the speed limit c, and the speed
// v0 = hbar k / m0 of the incident wave guiding it.
struct SRParticle {
    double m0;
    double c;
    double v0;

    SRParticle(double m0_, double c_, double v0_);

    // Incident kinetic energy m0 v0^2 / 2, conserved along the line.
    double wave_energy() const { return 0.5 * m0 * v0 * v0; }
    double rest_energy() const { return m0 * c * c; }
};

enum class ParticleKind { massive, photon };

// Reflection coefficient that makes the period-averaged particle velocity
// and energy reproduce the relativistic kinematics of a massive particle:
//   rho^2 = (v0^3 - c sqrt(v0^4 - 4 c^4)) / (v0^3 + c sqrt(v0^4 - 4 c^4)).
// Domain v0 >= c sqrt(2), i.e. wave energy at least the rest energy.
double massive_reflection_sq(const SRParticle& p);

// Photon analogue: rho^2 = (v0 - c)/(v0 + c), domain v0 >= c.
double photon_reflection_sq(const SRParticle& p);

// Period-averaged velocity that results from the reflection coefficient of
// the given kind. Massive: c sqrt(v0^4 - 4 c^4) / v0^2, which starts at zero
// on the domain floor and approaches c from below. Photon: exactly c.
double emergent_velocity(const SRParticle& p, ParticleKind kind);

// Everything the relativistic correspondence predicts for one particle:
// reflection and transmission coefficients, average velocity, the Lorentz
// factor of that velocity, relativistic mass and energy, and whether
// E = gamma m0 c^2 reproduces the wave energy m0 v0^2 / 2.
struct SRReport {
    double v0;
    double rho_sq;
    double t_sq;
    double v_av;
    double gamma;
    double m;
    double e;
    bool identities_pass;
};

SRReport sr_report(const SRParticle& p);

struct TransmissionPoint {
    double e_over_e0;  // energy in units of the rest energy
    double t_sq;       // transmission coefficient 1 - rho^2
};

// Transmission coefficient of the massive correspondence on a uniform energy
// grid [e_min, e_max], energies in absolute units. Zero at the rest energy,
// a single interior maximum, then a slow decay back towards zero.
std::vector<TransmissionPoint> transmission_curve(double e_min, double e_max, int n,
                                                  const PhysicalConstants& pc);

// Energy of the transmission maximum, located to within tol by a bracketing
// search on [E0, 10 E0]. Sits at sqrt(3) E0.
double locate_resonance(const PhysicalConstants& pc, double tol);

} // namespace bohm1d

#endif
