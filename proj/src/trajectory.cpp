#include "bohm1d/trajectory.hpp"

#include "bohm1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bohm1d {

namespace {

// Dormand-Prince 5(4) tableau, with the error weights of the embedded
// fourth-order solution and the weights of the fifth-order continuous
// extension. First-same-as-last: stage 7 is the derivative at the step end.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double eval_quantum(const GuidingField& field, double x) {
    return field.quantum_potential ? field.quantum_potential(x) : 0.0;
}

// Position reached after time t in a superposition field, by inverting the
// closed-form flight time with bracketed Newton iteration. The flight time
// is strictly increasing in the endpoint, so the bracket never lies.
double analytic_position(const SuperpositionState& s, const PhysicalConstants& pc, double x0,
                         double t) {
    if (t == 0.0)
        return x0;
    VelocityExtremes ve = v_extremes(s, pc);
    double lo = x0 + ve.v_min * t;
    double hi = x0 + ve.v_max * t;
    if (t < 0.0)
        std::swap(lo, hi);

    double x = x0 + average_velocity(s.rho, pc.v0_of_k(s.k)) * t;
    x = std::clamp(x, lo, hi);
    double scale = std::max(std::abs(x0), std::numbers::pi / s.k);

    for (int i = 0; i < 200; ++i) {
        double f = time_of_flight(s, pc, x0, x) - t;
        if (f < 0.0)
            lo = x;
        else
            hi = x;
        double step = -f * velocity_at(s, pc, x);
        double next = x + step;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * scale)
            return next;
        x = next;
    }
    return x;
}

} // namespace

GuidingField make_field(const SuperpositionState& s, const PhysicalConstants& pc) {
    GuidingField f;
    f.velocity = [s, pc](double x) { return velocity_at(s, pc, x); };
    f.quantum_potential = [s, pc](double x) { return quantum_potential_at(s, pc, x); };
    return f;
}

GuidingField make_field(const ScatteringSolution& sol, const SquareBarrier& b,
                        const PhysicalConstants& pc) {
    GuidingField f;
    f.velocity = [sol, b, pc](double x) { return barrier_velocity_at(sol, b, pc, x); };
    f.quantum_potential = [sol, b, pc](double x) {
        return barrier_quantum_potential_at(sol, b, pc, x);
    };
    return f;
}

double DenseSegment::eval(double theta) const {
    return c[0] + theta * (c[1] + theta * (c[2] + theta * (c[3] + theta * c[4])));
}

double DenseSegment::deriv(double theta) const {
    return c[1] + theta * (2.0 * c[2] + theta * (3.0 * c[3] + theta * 4.0 * c[4]));
}

double DenseSegment::theta_at(double x) const {
    double span = x_end - x_begin;
    if (span == 0.0)
        return 0.0;
    double lo = 0.0, hi = 1.0;
    double theta = std::clamp((x - x_begin) / span, 0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        double f = eval(theta) - x;
        if (f == 0.0)
            return theta;
        if ((span > 0.0) == (f < 0.0))
            lo = theta;
        else
            hi = theta;
        double d = deriv(theta);
        double next = (d != 0.0) ? theta - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - theta) <= 1e-15)
            return next;
        theta = next;
    }
    return theta;
}

double Trajectory::position_at(double t) const {
    if (samples.empty())
        throw std::logic_error("Trajectory::position_at: empty trajectory");
    if (exact_position_of_time)
        return exact_position_of_time(t);
    double t_begin = dense.front().t0;
    double t_end = dense.back().t0 + dense.back().h;
    double slack = 1e-12 * std::max(std::abs(t_begin), std::abs(t_end));
    if (t < t_begin - slack || t > t_end + slack)
        throw std::invalid_argument("Trajectory::position_at: time outside the trajectory");
    t = std::clamp(t, t_begin, t_end);

    auto it = std::upper_bound(dense.begin(), dense.end(), t,
                               [](double tq, const DenseSegment& seg) { return tq < seg.t0; });
    if (it != dense.begin())
        --it;
    return it->eval((t - it->t0) / it->h);
}

double Trajectory::time_at_position(double x) const {
    if (samples.empty())
        throw std::logic_error("Trajectory::time_at_position: empty trajectory");
    if (exact_time_of_position)
        return exact_time_of_position(x);
    double x_begin = dense.front().x_begin;
    double x_end = dense.back().x_end;
    double slack = 1e-12 * std::max(std::abs(x_begin), std::abs(x_end));
    if (x < x_begin - slack || x > x_end + slack)
        throw std::invalid_argument("Trajectory::time_at_position: position outside the trajectory");
    x = std::clamp(x, x_begin, x_end);

    auto it = std::upper_bound(dense.begin(), dense.end(), x,
                               [](double xq, const DenseSegment& seg) { return xq < seg.x_begin; });
    if (it != dense.begin())
        --it;
    return it->t0 + it->h * it->theta_at(x);
}

Trajectory integrate(const GuidingField& field, double x0, double t_end, double tol,
                     const IntegrateOptions& opts) {
    if (!field.velocity)
        throw std::invalid_argument("integrate: field has no velocity callable");
    if (!(t_end > 0.0))
        throw std::invalid_argument("integrate: t_end must be positive");
    if (!(tol > 0.0 && tol <= 1e-2))
        throw std::invalid_argument("integrate: tol must lie in (0, 1e-2]");
    if (!(opts.char_length > 0.0))
        throw std::invalid_argument("integrate: char_length must be positive");

    auto f = [&](double x) { return field.velocity(x); };

    double v_start = f(x0);
    if (v_start < 0.0)
        throw std::domain_error("integrate: field must not drive motion backwards");

    double v_ref = opts.v_ref > 0.0 ? opts.v_ref : std::max(std::abs(v_start), 1e-300);
    double stall_v = opts.stall_fraction * v_ref;
    double stall_budget = opts.stall_time > 0.0 ? opts.stall_time : 1e-2 * t_end;
    double atol = tol * opts.char_length;
    double h_min = opts.min_step_fraction * t_end;

    Trajectory traj;
    traj.method = TrajectoryMethod::ode;
    traj.samples.push_back({0.0, x0, v_start, eval_quantum(field, x0)});

    double t = 0.0;
    double x = x0;
    double k1 = v_start;
    double h = std::min(t_end, 0.25 * opts.char_length / std::max(std::abs(k1), 1e-3 * v_ref));
    double stalled = 0.0;
    double facmax = 5.0;
    long steps = 0;

    while (t_end - t > 1e-15 * t_end) {
        if (++steps > opts.max_steps)
            throw StepControlError("integrate: step budget exhausted");
        if (t + h >= t_end)
            h = t_end - t;

        double k2 = f(x + h * (a21 * k1));
        double k3 = f(x + h * (a31 * k1 + a32 * k2));
        double k4 = f(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
        double k5 = f(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        double k6 = f(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        double x1 = x + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        double k7 = f(x1);

        double err_est =
            std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        double sk = atol + tol * std::max(std::abs(x), std::abs(x1));
        double err = err_est / sk;

        if (err <= 1.0) {
            DenseSegment seg;
            seg.t0 = t;
            seg.h = h;
            seg.x_begin = x;
            seg.x_end = x1;
            double ydiff = x1 - x;
            double bspl = h * k1 - ydiff;
            double rc3 = bspl;
            double rc4 = ydiff - h * k7 - bspl;
            double rc5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            seg.c[0] = x;
            seg.c[1] = ydiff + rc3;
            seg.c[2] = -rc3 + rc4 + rc5;
            seg.c[3] = -rc4 - 2.0 * rc5;
            seg.c[4] = rc5;
            traj.dense.push_back(seg);

            if (opts.max_dx > 0.0 && std::abs(ydiff) > opts.max_dx) {
                int m = static_cast<int>(std::ceil(std::abs(ydiff) / opts.max_dx));
                for (int j = 1; j < m; ++j) {
                    double xj = x + ydiff * static_cast<double>(j) / m;
                    double theta = seg.theta_at(xj);
                    traj.samples.push_back(
                        {t + theta * h, xj, f(xj), eval_quantum(field, xj)});
                }
            }
            traj.samples.push_back({t + h, x1, k7, eval_quantum(field, x1)});

            traj.diag.accepted += 1;
            traj.diag.max_local_error = std::max(traj.diag.max_local_error, err * tol);

            if (std::abs(k7) < stall_v) {
                stalled += h;
                if (stalled >= stall_budget)
                    throw StallError("integrate: particle stalled (velocity below " +
                                         std::to_string(stall_v) + ")",
                                     x1, t + h);
            } else {
                stalled = 0.0;
            }

            t += h;
            x = x1;
            k1 = k7;

            double grow = 0.9 * std::pow(1.0 / std::max(err, 1e-50), 0.2);
            h *= std::clamp(grow, 0.2, facmax);
            facmax = 5.0;
        } else {
            traj.diag.rejected += 1;
            // A non-finite error estimate (field returned NaN or inf for
            // some stage) gets the maximal shrink so the run fails fast
            // through the underflow check instead of spinning.
            double shrink = std::isfinite(err)
                                ? std::clamp(0.9 * std::pow(1.0 / err, 0.2), 0.2, 1.0)
                                : 0.2;
            h *= shrink;
            facmax = 1.0;
            if (h < h_min || t + h == t)
                throw StepControlError(
                    "integrate: step size underflow at x = " + std::to_string(x));
        }
    }
    return traj;
}

double time_of_flight(const SuperpositionState& s, const PhysicalConstants& pc, double x_start,
                      double x_end) {
    if (s.degenerate())
        throw std::domain_error("time_of_flight: rho = 1 means infinite traversal time");
    double r2 = s.rho * s.rho;
    double osc = (s.rho / s.k) *
                 (std::sin(2.0 * s.k * x_end - s.phi) - std::sin(2.0 * s.k * x_start - s.phi));
    return ((1.0 + r2) * (x_end - x_start) + osc) / (pc.v0_of_k(s.k) * (1.0 - r2));
}

Trajectory integrate_analytic(const SuperpositionState& s, const PhysicalConstants& pc, double x0,
                              double t_end, double max_dx) {
    if (s.degenerate())
        throw std::domain_error("integrate_analytic: rho = 1 means infinite traversal time");
    if (!(t_end > 0.0))
        throw std::invalid_argument("integrate_analytic: t_end must be positive");
    double period = std::numbers::pi / s.k;
    if (max_dx <= 0.0)
        max_dx = period / 8.0;

    double x_end = analytic_position(s, pc, x0, t_end);
    int n = std::max(1, static_cast<int>(std::ceil((x_end - x0) / max_dx)));

    Trajectory traj;
    traj.method = TrajectoryMethod::analytic;
    traj.samples.reserve(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        double xj = (j == n) ? x_end : x0 + (x_end - x0) * static_cast<double>(j) / n;
        double tj = (j == 0) ? 0.0 : time_of_flight(s, pc, x0, xj);
        traj.samples.push_back(
            {tj, xj, velocity_at(s, pc, xj), quantum_potential_at(s, pc, xj)});
    }

    traj.exact_time_of_position = [s, pc, x0](double xq) {
        return time_of_flight(s, pc, x0, xq);
    };
    traj.exact_position_of_time = [s, pc, x0](double tq) {
        return analytic_position(s, pc, x0, tq);
    };
    return traj;
}

double measure_average_velocity(const Trajectory& traj, double k) {
    if (!(k > 0.0))
        throw std::invalid_argument("measure_average_velocity: k must be positive");
    if (traj.samples.size() < 2)
        throw std::invalid_argument("measure_average_velocity: trajectory has no extent");

    double period = std::numbers::pi / k;
    double x_first = traj.samples.front().x;
    double t_first = traj.samples.front().t;
    double span = traj.samples.back().x - x_first;
    int n = static_cast<int>(std::floor(span / period));
    if (n < 1)
        throw std::invalid_argument(
            "measure_average_velocity: trajectory spans less than one period");

    double t_arrive = traj.time_at_position(x_first + n * period);
    return n * period / (t_arrive - t_first);
}

} // namespace bohm1d
