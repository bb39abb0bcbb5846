#ifndef BOHM1D_WAVEFIELD_HPP
#define BOHM1D_WAVEFIELD_HPP

#include "bohm1d/constants.hpp"

namespace bohm1d {

// Amplitude threshold below which a point counts as a wave node, relative
// to the maximum amplitude of the state. Used by the amplitude/phase
// decomposition and by the interference denominator guard.
inline constexpr double node_eps = 1e-12;

// Incident plane wave plus reflected wave on the half line x < 0:
//
//   psi(x) = exp(ikx) + rho exp(i phi) exp(-ikx)
//
// rho^2 is the reflection coefficient of whatever obstacle occupies x >= 0;
// rho = 0 is free motion, rho = 1 a standing wave with zero current.
struct SuperpositionState {
    double k;    // incident wavenumber, > 0
    double rho;  // modulus of the reflection amplitude, in [0, 1]
    double phi;  // reflection phase, stored wrapped to [0, 2*pi)

    SuperpositionState(double k_, double rho_, double phi_);

    // Full reflection: the current vanishes identically and the velocity
    // field degenerates to zero between nodes.
    bool degenerate() const { return rho == 1.0; }

    double v0(const PhysicalConstants& pc) const { return pc.v0_of_k(k); }
};

// One point of the guiding field in polar form psi = R exp(iS/hbar):
// amplitude, phase gradient, and the kinematics derived from them.
struct FieldSample {
    double x;
    double v;       // particle velocity S'/m0
    double q;       // quantum potential -(hbar^2/2m0) R''/R
    double r;       // amplitude R = |psi|
    double s_grad;  // phase gradient S' = m0 v
};

// Maps any angle to the canonical interval [0, 2*pi).
double wrap_phase(double phi);

// Particle velocity of the pilot wave at x, from the closed form
//   v = (hbar k/m0) (1 - rho^2) / (1 + rho^2 + 2 rho cos(2kx - phi)).
// Strictly positive for rho < 1. For rho = 1 it returns 0 between nodes
// and throws NodeError when the denominator collapses at a node.
double velocity_at(const SuperpositionState& s, const PhysicalConstants& pc, double x);

// Quantum potential at x. Oscillates between the kinetic-energy-like bounds
// so that Q + m0 v^2/2 stays constant along the line.
double quantum_potential_at(const SuperpositionState& s, const PhysicalConstants& pc, double x);

// Polar decomposition at x via direct complex arithmetic on psi, as an
// alternative route to the closed forms above. Throws NodeError at nodes.
FieldSample amplitude_phase_at(const SuperpositionState& s, const PhysicalConstants& pc, double x);

struct VelocityExtremes {
    double v_min;
    double v_max;
};

// Velocity bounds over one spatial period:
//   v_min = v0 (1 - rho)/(1 + rho),  v_max = v0 (1 + rho)/(1 - rho).
// Their product is v0^2 for every rho. For rho = 1, v_max is infinite.
VelocityExtremes v_extremes(const SuperpositionState& s, const PhysicalConstants& pc);

// Reflection amplitude at which the velocity peaks reach the speed limit c:
//   rho* = (c - v0)/(c + v0), valid for 0 < v0 <= c.
// Any rho above it makes v_max exceed c.
double superluminal_threshold(double v0, double c);

// Average particle velocity over one spatial period, distance over time:
//   v_av = v0 (1 - rho^2)/(1 + rho^2).
// Slower than v0 for any rho > 0 and zero at full reflection.
double average_velocity(double rho, double v0);

} // namespace bohm1d

#endif
