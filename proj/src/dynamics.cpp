#include "tomosc/dynamics.hpp"

#include <cmath>

#include "tomosc/errors.hpp"
#include "tomosc/quadrature.hpp"

namespace tomosc::dynamics {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// integral of cos(a tau + phi) over [0,t], stable for a -> 0
double int_cos(double a, double phi, double t) {
  const double h = 0.5 * a * t;
  return t * sinc(h) * std::cos(phi + h);
}

// integral of sin(a tau + phi) over [0,t], stable for a -> 0
double int_sin(double a, double phi, double t) {
  const double h = 0.5 * a * t;
  return t * sinc(h) * std::sin(phi + h);
}

}  // namespace

DriveIntegrals drive_integrals(const ForceModel& force, double t, double abs_tol) {
  if (!(t >= 0.0)) throw ValidationError("drive_integrals: t must be nonnegative");
  DriveIntegrals di;
  di.t = t;
  if (t == 0.0) return di;

  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroForce>) {
          // all zero
        } else if constexpr (std::is_same_v<T, ConstantForce>) {
          di.F = f.f0 * (1.0 - std::cos(t));
          di.J = f.f0 * std::sin(t);
        } else if constexpr (std::is_same_v<T, SinusoidalForce>) {
          // sin(tau) sin(w tau + phi) = [cos((w-1)tau + phi) - cos((w+1)tau + phi)] / 2
          // cos(tau) sin(w tau + phi) = [sin((w+1)tau + phi) + sin((w-1)tau + phi)] / 2
          const double w = f.frequency, phi = f.phase, A = f.amplitude;
          di.F = 0.5 * A * (int_cos(w - 1.0, phi, t) - int_cos(w + 1.0, phi, t));
          di.J = 0.5 * A * (int_sin(w + 1.0, phi, t) + int_sin(w - 1.0, phi, t));
        } else {
          di.F = adaptive_simpson(
              [&force](double tau) { return std::sin(tau) * force.value(tau); }, 0.0, t, abs_tol);
          di.J = adaptive_simpson(
              [&force](double tau) { return std::cos(tau) * force.value(tau); }, 0.0, t, abs_tol);
        }
      },
      force.raw());

  const double c = std::cos(t), s = std::sin(t);
  di.x_tilde = di.J * s - di.F * c;
  di.p_tilde = di.J * c + di.F * s;
  return di;
}

PhasePoint classical_trajectory(double q0, double p0, const ForceModel& force, double t) {
  const DriveIntegrals di = drive_integrals(force, t);
  const double c = std::cos(t), s = std::sin(t);
  return {q0 * c + p0 * s + di.x_tilde, p0 * c - q0 * s + di.p_tilde};
}

PhasePoint invariants_q0p0(const PhasePoint& qp, const ForceModel& force, double t) {
  const DriveIntegrals di = drive_integrals(force, t);
  const double c = std::cos(t), s = std::sin(t);
  return {qp.q * c - qp.p * s + di.F, qp.p * c + qp.q * s - di.J};
}

ClassicalDensity liouville_evolve(const ClassicalDensity& rho0, const ForceModel& force,
                                  double t) {
  if (!rho0.density) throw ValidationError("liouville_evolve: empty density");
  const DriveIntegrals di = drive_integrals(force, t);
  const double c = std::cos(t), s = std::sin(t);
  auto base = rho0.density;
  ClassicalDensity out;
  out.density = [base, c, s, F = di.F, J = di.J](double q, double p) {
    return base(q * c - p * s + F, p * c + q * s - J);
  };
  out.label = rho0.label;
  return out;
}

}  // namespace tomosc::dynamics
