#include "bohm1d/wavefield.hpp"

#include "bohm1d/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace bohm1d {

namespace {

// Interference denominator 1 + rho^2 + 2 rho cos(2kx - phi) = |psi|^2.
// Minimum (1 - rho)^2, so it only vanishes at the nodes of a standing wave.
double interference_den(const SuperpositionState& s, double x) {
    return 1.0 + s.rho * s.rho + 2.0 * s.rho * std::cos(2.0 * s.k * x - s.phi);
}

} // namespace

double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0)
        w += two_pi;
    // fmod can return exactly two_pi after the correction when phi is a
    // tiny negative number; fold that back to zero.
    if (w >= two_pi)
        w = 0.0;
    return w;
}

SuperpositionState::SuperpositionState(double k_, double rho_, double phi_)
    : k(k_), rho(rho_), phi(wrap_phase(phi_)) {
    if (!(k > 0.0))
        throw std::invalid_argument("SuperpositionState: k must be positive");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("SuperpositionState: rho must lie in [0, 1]");
}

double velocity_at(const SuperpositionState& s, const PhysicalConstants& pc, double x) {
    double den = interference_den(s, x);
    if (s.degenerate()) {
        // Standing wave: zero current everywhere, but the velocity is only
        // defined away from the nodes where the wave itself vanishes.
        if (den < node_eps)
            throw NodeError("velocity_at: node of a fully reflected wave at x = " +
                                std::to_string(x),
                            x);
        return 0.0;
    }
    double num = 1.0 - s.rho * s.rho;
    return pc.v0_of_k(s.k) * num / den;
}

double quantum_potential_at(const SuperpositionState& s, const PhysicalConstants& pc, double x) {
    double den = interference_den(s, x);
    double scale = pc.hbar * s.k * (pc.hbar * s.k) / (2.0 * pc.m0);
    if (s.degenerate()) {
        if (den < node_eps)
            throw NodeError("quantum_potential_at: node of a fully reflected wave at x = " +
                                std::to_string(x),
                            x);
        // Zero velocity between nodes: the quantum potential carries the
        // whole kinetic energy budget of the incident wave.
        return scale;
    }
    double ratio = (1.0 - s.rho * s.rho) / den;
    return scale * (1.0 - ratio * ratio);
}

FieldSample amplitude_phase_at(const SuperpositionState& s, const PhysicalConstants& pc, double x) {
    using namespace std::complex_literals;
    std::complex<double> fwd = std::exp(1i * (s.k * x));
    std::complex<double> bwd = std::exp(-1i * (s.k * x));
    std::complex<double> refl = s.rho * std::exp(1i * s.phi);

    std::complex<double> psi = fwd + refl * bwd;
    std::complex<double> dpsi = 1i * s.k * (fwd - refl * bwd);

    double r = std::abs(psi);
    double max_amp = 1.0 + s.rho;
    if (r < node_eps * max_amp)
        throw NodeError("amplitude_phase_at: wave node at x = " + std::to_string(x), x);

    // S' = hbar Im(psi' / psi); the current density is R^2 S' / m0.
    double s_grad = pc.hbar * std::imag(dpsi * std::conj(psi)) / (r * r);
    double v = s_grad / pc.m0;

    // Energy balance of the stationary state fixes Q once v is known.
    double q = pc.energy_of_k(s.k) - 0.5 * pc.m0 * v * v;

    return FieldSample{x, v, q, r, s_grad};
}

VelocityExtremes v_extremes(const SuperpositionState& s, const PhysicalConstants& pc) {
    double v0 = pc.v0_of_k(s.k);
    double v_min = v0 * (1.0 - s.rho) / (1.0 + s.rho);
    double v_max = s.degenerate() ? std::numeric_limits<double>::infinity()
                                  : v0 * (1.0 + s.rho) / (1.0 - s.rho);
    return VelocityExtremes{v_min, v_max};
}

double superluminal_threshold(double v0, double c) {
    if (!(c > 0.0))
        throw std::domain_error("superluminal_threshold: c must be positive");
    if (!(v0 > 0.0 && v0 <= c))
        throw std::domain_error("superluminal_threshold: requires 0 < v0 <= c");
    return (c - v0) / (c + v0);
}

double average_velocity(double rho, double v0) {
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("average_velocity: rho must lie in [0, 1]");
    double r2 = rho * rho;
    return v0 * (1.0 - r2) / (1.0 + r2);
}

} // namespace bohm1d
