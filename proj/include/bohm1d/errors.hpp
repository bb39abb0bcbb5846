#ifndef BOHM1D_ERRORS_HPP
#define BOHM1D_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bohm1d {

// Base for conditions where the guiding field stops defining usable particle
// kinematics. Parameter and range mistakes use std::invalid_argument or
// std::domain_error instead; this family is for legitimate inputs that run
// into a physical degeneracy (standing-wave nodes, full-reflection stalls).
class DegeneracyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// |psi| fell below the node cutoff: the phase, and with it the velocity,
// is undefined at a node.
class NodeError : public DegeneracyError {
  public:
    NodeError(const std::string& msg, double x) : DegeneracyError(msg), x_(x) {}
    double where() const { return x_; }

  private:
    double x_;
};

// The particle sat below the stall speed for longer than the configured
// grace time. Full reflection (rho = 1) immobilises the particle, so a
// trajectory in a standing wave ends here rather than running forever.
class StallError : public DegeneracyError {
  public:
    StallError(const std::string& msg, double x, double t)
        : DegeneracyError(msg), x_(x), t_(t) {}
    double where() const { return x_; }
    double when() const { return t_; }

  private:
    double x_;
    double t_;
};

// The step controller could not meet the local error target above the
// minimum step size, or ran out of its step budget.
class StepControlError : public DegeneracyError {
  public:
    using DegeneracyError::DegeneracyError;
};

} // namespace bohm1d

#endif
