#ifndef BOHM1D_TRAJECTORY_HPP
#define BOHM1D_TRAJECTORY_HPP

#include "bohm1d/barrier.hpp"
#include "bohm1d/constants.hpp"
#include "bohm1d/wavefield.hpp"

#include <array>
#include <functional>
#include <vector>

namespace bohm1d {

// Velocity field along the line, with the quantum potential alongside for
// bookkeeping. The velocity drives the equation of motion dx/dt = v(x);
// both callables must be valid for every x the trajectory can visit.
struct GuidingField {
    std::function<double(double)> velocity;
    std::function<double(double)> quantum_potential;
};

GuidingField make_field(const SuperpositionState& s, const PhysicalConstants& pc);
GuidingField make_field(const ScatteringSolution& sol, const SquareBarrier& b,
                        const PhysicalConstants& pc);

struct TrajectorySample {
    double t;
    double x;
    double v;  // field velocity at x
    double q;  // quantum potential at x
};

struct StepDiagnostics {
    long accepted = 0;
    long rejected = 0;
    double max_local_error = 0.0;  // largest accepted local error estimate
};

// Quartic interpolant x(t0 + theta h), theta in [0, 1], stored in power
// basis. Gives every integration step a continuous, differentiable record
// so times and positions can be queried between steps.
struct DenseSegment {
    double t0;
    double h;
    double x_begin;
    double x_end;
    std::array<double, 5> c;

    double eval(double theta) const;
    double deriv(double theta) const;  // dx/dtheta
    // Inverts the segment: theta with eval(theta) = x, for x between the
    // endpoint positions. Newton iteration with a bisection safeguard.
    double theta_at(double x) const;
};

enum class TrajectoryMethod { ode, analytic };

// A computed particle path. Positions increase monotonically; between
// samples the path can be queried continuously, either through the dense
// integrator output or through exact closed-form hooks installed by the
// analytic route.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<DenseSegment> dense;
    TrajectoryMethod method = TrajectoryMethod::ode;
    StepDiagnostics diag;

    // Set by the analytic route; empty for ODE trajectories.
    std::function<double(double)> exact_position_of_time;
    std::function<double(double)> exact_time_of_position;

    double position_at(double t) const;
    double time_at_position(double x) const;
};

struct IntegrateOptions {
    // Length scale of the field's structure; the absolute error tolerance
    // and the minimum step are expressed in terms of it.
    double char_length = 1.0;
    // Insert extra samples so consecutive positions differ by at most this
    // (0 disables the cap).
    double max_dx = 0.0;
    // Reference speed for stall detection; 0 means use |v(x0)|.
    double v_ref = 0.0;
    double stall_fraction = 1e-9;
    // How long the particle may sit below the stall speed before the run
    // aborts; 0 means a hundredth of the requested horizon.
    double stall_time = 0.0;
    // Fraction of t_end below which a rejected step means the error target
    // is unreachable.
    double min_step_fraction = 1e-14;
    long max_steps = 10'000'000;
};

// Integrates dx/dt = v(x) from x0 over [0, t_end] with an adaptive
// Dormand-Prince 5(4) scheme, keeping the local error below tol relative
// to |x| (plus tol * char_length absolute). Throws StallError when the
// particle stops making progress and StepControlError when the controller
// cannot satisfy tol.
Trajectory integrate(const GuidingField& field, double x0, double t_end, double tol,
                     const IntegrateOptions& opts = {});

// Traversal time from x_start to x_end in the superposition field, in
// closed form (the reciprocal velocity integrates to an explicit
// expression). Antisymmetric under swapping the endpoints. Throws for
// rho = 1, where the traversal time diverges.
double time_of_flight(const SuperpositionState& s, const PhysicalConstants& pc, double x_start,
                      double x_end);

// Same trajectory as integrate() for a superposition field, but built from
// the closed-form flight time: sample times are exact, and the returned
// trajectory answers position/time queries through the closed form instead
// of interpolation. max_dx <= 0 selects an eighth of the spatial period.
Trajectory integrate_analytic(const SuperpositionState& s, const PhysicalConstants& pc, double x0,
                              double t_end, double max_dx = 0.0);

// Average velocity over the largest whole number of spatial periods
// pi/k the trajectory covers: period distance over measured time.
// Requires the trajectory to span at least one period.
double measure_average_velocity(const Trajectory& traj, double k);

} // namespace bohm1d

#endif
