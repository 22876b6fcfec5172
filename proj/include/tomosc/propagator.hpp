#pragma once

#include <complex>

#include "tomosc/dynamics.hpp"
#include "tomosc/states.hpp"

namespace tomosc::propagator {

/// Physical constants for the scaled-units and free-limit kernels.
/// The rest of the library works in hbar = m = omega = 1.
struct UnitsConfig {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  void validate() const;
};

struct GreenKernelParams {
  dynamics::ForceModel force = dynamics::ForceModel::zero();
  double t = 0.0;
  double caustic_tolerance = 1e-6;
};

/// Accumulated quadratic phase of the drive:
///   integral over [0,t] of F(tau)^2 / sin^2(tau),
/// with the integrand's tau -> 0 limit (zero) applied analytically.
/// Requires 0 < t < pi.
double phase_integral(const dynamics::ForceModel& force, double t, double abs_tol = 1e-10);

/// Time-evolution kernel of the driven oscillator, valid between caustics
/// (0 < t < pi and sin t above the caustic tolerance):
///
///   G(x, x', t) = (2 pi i sin t)^{-1/2}
///                 * exp(-i/2 * phase_integral(t))
///                 * exp(i [ (x^2 + x'^2) cos t - 2 x x' ] / (2 sin t))
///                 * exp(i [ x F(t) + x' x_tilde(t) ] / sin t)
///
/// The drive integrals and phase integral are computed once at construction;
/// operator() costs one complex exponential.
class GreenKernel {
 public:
  explicit GreenKernel(const GreenKernelParams& params);
  std::complex<double> operator()(double x, double x_prime) const;
  double phase_integral_value() const { return phase_int_; }
  const dynamics::DriveIntegrals& drive() const { return drive_; }

 private:
  double sin_t_, cos_t_;
  double phase_int_;
  dynamics::DriveIntegrals drive_;
  std::complex<double> prefactor_;
};

/// Single evaluation of the kernel above.
std::complex<double> green_function(double x, double x_prime, const GreenKernelParams& params);

/// Dedicated constant-force kernel (coordinates shifted by f0):
///   (2 pi i sin t)^{-1/2} exp(i f0^2 t / 2)
///   * exp(i [ ((x-f0)^2 + (x'-f0)^2) cos t - 2 (x-f0)(x'-f0) ] / (2 sin t))
std::complex<double> green_constant_force(double x, double x_prime, double f0, double t,
                                          double caustic_tolerance = 1e-6);

/// Kernel with units restored through the substitutions t -> omega t,
/// x -> sqrt(m omega / hbar) x, f0 -> f0 / (omega sqrt(m hbar omega)), including
/// the sqrt(m omega / hbar) density factor. Constant force only.
std::complex<double> green_function_scaled(double x, double x_prime, double t, double f0,
                                           const UnitsConfig& units,
                                           double caustic_tolerance = 1e-6);

/// omega -> 0 limit: driven free particle,
///   sqrt(m / (2 pi i hbar t)) exp[ (i/hbar) ( -f0^2 t^3 / (24 m)
///                                             + f0 t (x + x') / 2
///                                             + m (x - x')^2 / (2 t) ) ]
std::complex<double> green_free_limit(double x, double x_prime, double t, double f0,
                                      const UnitsConfig& units);

/// Quadrature propagation psi(x,t) = integral G(x,x',t) psi(x',0) dx' on the
/// state's grid (trapezoidal). Times at or beyond the first caustic are split
/// into sub-steps of at most pi/2, each using the force shifted to the
/// sub-step origin. No renormalization is applied; norm drift is a diagnostic.
///
/// The grid must resolve the kernel chirp of each sub-step:
///   dx <= pi |sin t_step| / (2 max|x|).
states::WaveFunctionGrid propagate(const states::WaveFunctionGrid& psi0,
                                   const dynamics::ForceModel& force, double t,
                                   double caustic_tolerance = 1e-6);

/// Closed-form evolution of the n-th number state under the drive:
///   psi_n(x,t) = e^{-i(n+1/2)t} (2^n n! sqrt(pi))^{-1/2}
///                * exp(-i/2 (phase_integral(t) + x_tilde^2 cot t))
///                * exp(-(x - x_tilde)^2 / 2 + i p_tilde x)
///                * H_n(x - x_tilde)
/// Requires 0 < t < pi (direct phase-integral window).
states::WaveFunctionGrid fock_evolution_closed(const states::FockIndex& n,
                                               const dynamics::ForceModel& force, double t,
                                               const GridSpec1D& grid = states::default_state_grid(),
                                               double caustic_tolerance = 1e-6);

/// Gaussian-Hermite moment parameters: alpha must be purely imaginary.
struct GaussianExponentParams {
  std::complex<double> alpha{0.0, 0.0};
  std::complex<double> beta{0.0, 0.0};
  void validate() const;
};

/// Closed form of integral exp((-1/2 + alpha) x^2 + beta x) H_n(x) dx:
///   sqrt(2 pi / (1 - 2 alpha)) exp(beta^2 / (2 (1 - 2 alpha)))
///   * i^n ((1 + 2 alpha) / sqrt(1 - 4 alpha^2))^n
///   * H_n(-i beta / sqrt(1 - 4 alpha^2))
/// with principal square roots.
std::complex<double> hermite_gauss_integral(const GaussianExponentParams& params,
                                            const states::FockIndex& n);

}  // namespace tomosc::propagator
