#pragma once

#include <functional>
#include <string>

#include "tomosc/force.hpp"

namespace tomosc::dynamics {

/// The four drive integrals at time t:
///   F(t)       = integral of sin(tau) f(tau)      over [0,t]
///   J(t)       = integral of cos(tau) f(tau)      over [0,t]
///   x_tilde(t) = integral of sin(t - tau) f(tau)  over [0,t]
///   p_tilde(t) = d x_tilde / dt
/// They satisfy x_tilde = J sin t - F cos t and p_tilde = J cos t + F sin t.
struct DriveIntegrals {
  double F = 0.0;
  double J = 0.0;
  double x_tilde = 0.0;
  double p_tilde = 0.0;
  double t = 0.0;
};

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

/// Nonnegative phase-space density with a human-readable label.
struct ClassicalDensity {
  std::function<double(double q, double p)> density;
  std::string label;
};

/// Drive integrals at t >= 0. Closed-form kinds are evaluated exactly;
/// tabulated forces use adaptive Simpson quadrature with the given absolute
/// tolerance on F and J.
DriveIntegrals drive_integrals(const ForceModel& force, double t, double abs_tol = 1e-10);

/// Classical trajectory of the driven oscillator (unit mass and frequency):
///   q(t) = q0 cos t + p0 sin t + x_tilde(t)
///   p(t) = p0 cos t - q0 sin t + p_tilde(t)
PhasePoint classical_trajectory(double q0, double p0, const ForceModel& force, double t);

/// Integrals of motion: the initial point that flows to (q,p) at time t.
PhasePoint invariants_q0p0(const PhasePoint& qp, const ForceModel& force, double t);

/// Density transported along the classical flow:
///   rho(q, p, t) = rho0(q0(q,p,t), p0(q,p,t)).
ClassicalDensity liouville_evolve(const ClassicalDensity& rho0, const ForceModel& force, double t);

}  // namespace tomosc::dynamics
