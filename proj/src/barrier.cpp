#include "bohm1d/barrier.hpp"

#include "bohm1d/errors.hpp"
#include "bohm1d/wavefield.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bohm1d {

using namespace std::complex_literals;
using cplx = std::complex<double>;

namespace {

// Below this value of |k_in a|^2 the interior is treated as exactly linear.
// The exact E = V0 branch is used instead of trig/hyperbolic forms whose
// interior coefficients blow up as 1/k_in and cancel.
constexpr double linear_interior_eps = 1e-12;

} // namespace

SquareBarrier::SquareBarrier(double V0_, double a_, double x_left_)
    : V0(V0_), a(a_), x_left(x_left_) {
    if (!(V0 > 0.0))
        throw std::invalid_argument("SquareBarrier: V0 must be positive");
    if (!(a > 0.0))
        throw std::invalid_argument("SquareBarrier: width must be positive");
}

ScatteringSolution solve_barrier(const SquareBarrier& b, double energy,
                                 const PhysicalConstants& pc) {
    if (!(energy > 0.0))
        throw std::domain_error("solve_barrier: energy must be positive");

    ScatteringSolution sol{};
    sol.energy = energy;
    sol.k = pc.k_of_energy(energy);
    double k = sol.k;

    // Signed square of the interior wavenumber, negative under the barrier.
    double q2 = 2.0 * pc.m0 * (energy - b.V0) / (pc.hbar * pc.hbar);

    if (std::abs(q2) * b.a * b.a <= linear_interior_eps) {
        // Incident energy matches the barrier top: psi is linear inside.
        sol.linear_interior = true;
        sol.k_in = 0.0;
        cplx den = 2.0 - 1i * (k * b.a);
        sol.t = 2.0 * std::exp(-1i * (k * b.a)) / den;
        sol.r = -1i * (k * b.a) / den;
        sol.a_in = 2.0 * (1.0 - 1i * (k * b.a)) / den;  // value at the left edge
        sol.b_in = 2.0 * 1i * k / den;                  // constant slope
        return sol;
    }

    sol.linear_interior = false;
    if (q2 < 0.0) {
        // Tunnelling branch, interior wavenumber i*kappa. Everything is
        // assembled from exp(-kappa a) so opaque barriers cannot overflow;
        // expm1 keeps the thin-barrier limit accurate.
        double kappa = std::sqrt(-q2);
        sol.k_in = 1i * kappa;
        double ex = std::exp(-kappa * b.a);
        double ex2 = ex * ex;
        double em = -std::expm1(-2.0 * kappa * b.a);  // 1 - exp(-2 kappa a)
        cplx den2 = (1.0 + ex2) + 0.5i * (kappa / k - k / kappa) * em;
        sol.t = std::exp(-1i * (k * b.a)) * 2.0 * ex / den2;
        sol.r = -0.5i * (kappa / k + k / kappa) * em / den2;
        sol.a_in = (1.0 - 1i * (k / kappa)) / den2;
        sol.b_in = ex2 * (1.0 + 1i * (k / kappa)) / den2;
    } else {
        // Propagating interior branch.
        double k2 = std::sqrt(q2);
        sol.k_in = k2;
        double cc = std::cos(k2 * b.a);
        double ss = std::sin(k2 * b.a);
        cplx den = cc - 0.5i * (k / k2 + k2 / k) * ss;
        sol.t = std::exp(-1i * (k * b.a)) / den;
        sol.r = 0.5i * (k2 / k - k / k2) * ss / den;
        sol.a_in = 0.5 * sol.t * std::exp(1i * ((k - k2) * b.a)) * (1.0 + k / k2);
        sol.b_in = 0.5 * sol.t * std::exp(1i * ((k + k2) * b.a)) * (1.0 - k / k2);
    }
    return sol;
}

cplx barrier_psi_at(const ScatteringSolution& sol, const SquareBarrier& b, double x) {
    double s = x - b.x_left;
    double k = sol.k;
    if (s < 0.0)
        return std::exp(1i * (k * s)) + sol.r * std::exp(-1i * (k * s));
    if (s > b.a)
        return sol.t * std::exp(1i * (k * s));
    if (sol.linear_interior)
        return sol.a_in + sol.b_in * s;
    if (sol.k_in.imag() > 0.0) {
        // Tunnelling interior, written as two decaying exponentials. The
        // growing-branch coefficient relates to a_in by a unit-modulus
        // ratio once its exp(-2 kappa a) prefactor is pulled into the
        // exponent, so nothing here can overflow however opaque the
        // barrier is.
        double kappa = sol.k_in.imag();
        cplx ratio = cplx(kappa, k) / cplx(kappa, -k);
        return sol.a_in * (std::exp(-kappa * s) + ratio * std::exp(-kappa * (2.0 * b.a - s)));
    }
    return sol.a_in * std::exp(1i * (sol.k_in * s)) + sol.b_in * std::exp(-1i * (sol.k_in * s));
}

namespace {

// Largest amplitude the wave could reach at this position if its two
// branches added in phase. Judging the density against this local scale
// separates interference near-nodes, where the velocity genuinely blows
// up, from the exponential smallness deep under an opaque barrier, where
// the velocity is tiny and perfectly well conditioned.
double local_amp_scale(const ScatteringSolution& sol, const SquareBarrier& b, double s) {
    if (s < 0.0)
        return 1.0 + std::abs(sol.r);
    if (sol.linear_interior)
        return std::abs(sol.a_in) + std::abs(sol.b_in) * s;
    if (sol.k_in.imag() > 0.0) {
        double kappa = sol.k_in.imag();
        return std::abs(sol.a_in) *
               (std::exp(-kappa * s) + std::exp(-kappa * (2.0 * b.a - s)));
    }
    return std::abs(sol.a_in) + std::abs(sol.b_in);
}

} // namespace

double barrier_velocity_at(const ScatteringSolution& sol, const SquareBarrier& b,
                           const PhysicalConstants& pc, double x) {
    double s = x - b.x_left;
    // Transmitted plane wave: uniform motion at the incident speed.
    if (s > b.a)
        return pc.v0_of_k(sol.k);

    cplx psi = barrier_psi_at(sol, b, x);
    double den = std::norm(psi);
    double scale = local_amp_scale(sol, b, s);
    if (den < node_eps * scale * scale)
        throw NodeError("barrier_velocity_at: wave node at x = " + std::to_string(x), x);
    double t_sq = std::norm(sol.t);
    return pc.v0_of_k(sol.k) * t_sq / den;
}

double barrier_quantum_potential_at(const ScatteringSolution& sol, const SquareBarrier& b,
                                    const PhysicalConstants& pc, double x) {
    double v = barrier_velocity_at(sol, b, pc, x);
    double s = x - b.x_left;
    double pot = (s >= 0.0 && s <= b.a) ? b.V0 : 0.0;
    return sol.energy - pot - 0.5 * pc.m0 * v * v;
}

BarrierScan thick_barrier_scaling(const SquareBarrier& b, double v0_lo, double v0_hi, int n,
                                  const PhysicalConstants& pc, double min_opacity) {
    if (n < 2)
        throw std::invalid_argument("thick_barrier_scaling: need at least two scan points");
    if (!(v0_lo > 0.0) || !(v0_hi > v0_lo))
        throw std::invalid_argument("thick_barrier_scaling: need 0 < v0_lo < v0_hi");

    BarrierScan scan;
    scan.rows.reserve(static_cast<std::size_t>(n));

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        double v0 = v0_lo + (v0_hi - v0_lo) * static_cast<double>(i) / (n - 1);
        double energy = 0.5 * pc.m0 * v0 * v0;
        if (energy >= b.V0)
            throw std::domain_error("thick_barrier_scaling: scan reaches the barrier top");
        double kappa = std::sqrt(2.0 * pc.m0 * (b.V0 - energy)) / pc.hbar;
        if (kappa * b.a <= min_opacity)
            throw std::domain_error(
                "thick_barrier_scaling: barrier not opaque (needs kappa*a > " +
                std::to_string(min_opacity) + ")");

        ScatteringSolution sol = solve_barrier(b, energy, pc);
        double t_sq = std::norm(sol.t);
        // v0 (1-rho^2)/(1+rho^2) written in terms of the transmission: for
        // opaque barriers rho^2 rounds to 1 and would erase t_sq entirely.
        double v_av = v0 * t_sq / (2.0 - t_sq);
        scan.rows.push_back({v0, t_sq, v_av});

        double lx = std::log(v0);
        double ly = std::log(v_av);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }

    double m = static_cast<double>(n);
    scan.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return scan;
}

} // namespace bohm1d
