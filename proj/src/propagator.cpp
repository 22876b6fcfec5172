#include "tomosc/propagator.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tomosc/quadrature.hpp"

namespace tomosc::propagator {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::complex<double> iu{0.0, 1.0};

void check_direct_window(double t, double caustic_tolerance, const char* what) {
  if (!(t > 0.0) || !(t < pi))
    throw CausticError(std::string(what) + ": direct evaluation requires 0 < t < pi, got t = " +
                       std::to_string(t));
  if (!(std::sin(t) > caustic_tolerance))
    throw CausticError(std::string(what) + ": |sin t| = " + std::to_string(std::sin(t)) +
                       " at t = " + std::to_string(t) + " is within the caustic tolerance");
}

}  // namespace

void UnitsConfig::validate() const {
  if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0))
    throw ValidationError("UnitsConfig: mass, omega and hbar must be positive");
}

double phase_integral(const dynamics::ForceModel& force, double t, double abs_tol) {
  if (!(t > 0.0) || !(t < pi))
    throw CausticError("phase_integral: requires 0 < t < pi, got t = " + std::to_string(t));
  if (std::holds_alternative<dynamics::ZeroForce>(force.raw())) return 0.0;
  auto integrand = [&force](double tau) {
    if (tau == 0.0) return 0.0;  // F(tau) = O(tau^2), so the ratio vanishes at the origin
    const double F = dynamics::drive_integrals(force, tau).F;
    const double s = std::sin(tau);
    return F * F / (s * s);
  };
  return adaptive_simpson(integrand, 0.0, t, abs_tol);
}

GreenKernel::GreenKernel(const GreenKernelParams& params) {
  check_direct_window(params.t, params.caustic_tolerance, "GreenKernel");
  sin_t_ = std::sin(params.t);
  cos_t_ = std::cos(params.t);
  drive_ = dynamics::drive_integrals(params.force, params.t);
  phase_int_ = phase_integral(params.force, params.t);
  prefactor_ = 1.0 / std::sqrt(std::complex<double>(0.0, 2.0 * pi * sin_t_)) *
               std::exp(-0.5 * iu * phase_int_);
}

std::complex<double> GreenKernel::operator()(double x, double x_prime) const {
  const double quad = ((x * x + x_prime * x_prime) * cos_t_ - 2.0 * x * x_prime) / (2.0 * sin_t_);
  const double lin = (x * drive_.F + x_prime * drive_.x_tilde) / sin_t_;
  return prefactor_ * std::exp(iu * (quad + lin));
}

std::complex<double> green_function(double x, double x_prime, const GreenKernelParams& params) {
  return GreenKernel(params)(x, x_prime);
}

std::complex<double> green_constant_force(double x, double x_prime, double f0, double t,
                                          double caustic_tolerance) {
  check_direct_window(t, caustic_tolerance, "green_constant_force");
  const double s = std::sin(t), c = std::cos(t);
  const double u = x - f0, v = x_prime - f0;
  const double phase = 0.5 * f0 * f0 * t + ((u * u + v * v) * c - 2.0 * u * v) / (2.0 * s);
  return 1.0 / std::sqrt(std::complex<double>(0.0, 2.0 * pi * s)) * std::exp(iu * phase);
}

std::complex<double> green_function_scaled(double x, double x_prime, double t, double f0,
                                           const UnitsConfig& units, double caustic_tolerance) {
  units.validate();
  const double scale = std::sqrt(units.mass * units.omega / units.hbar);
  const double f0_scaled = f0 / (units.omega * std::sqrt(units.mass * units.hbar * units.omega));
  GreenKernelParams params{dynamics::ForceModel::constant(f0_scaled), units.omega * t,
                           caustic_tolerance};
  return scale * green_function(scale * x, scale * x_prime, params);
}

std::complex<double> green_free_limit(double x, double x_prime, double t, double f0,
                                      const UnitsConfig& units) {
  units.validate();
  if (!(t > 0.0)) throw ValidationError("green_free_limit: t must be positive");
  const double m = units.mass, hb = units.hbar;
  const double d = x - x_prime;
  const double action = -f0 * f0 * t * t * t / (24.0 * m) + 0.5 * f0 * t * (x + x_prime) +
                        m * d * d / (2.0 * t);
  return std::sqrt(m / std::complex<double>(0.0, 2.0 * pi * hb * t)) *
         std::exp(iu * action / hb);
}

states::WaveFunctionGrid propagate(const states::WaveFunctionGrid& psi0,
                                   const dynamics::ForceModel& force, double t,
                                   double caustic_tolerance) {
  if (!(t > 0.0)) throw ValidationError("propagate: t must be positive");
  const GridSpec1D& grid = psi0.spec();
  const int n = grid.n_points;
  const double dx = grid.dx();

  const int n_steps = std::max(1, static_cast<int>(std::ceil(t / (0.5 * pi))));
  const double h = t / n_steps;
  if (!(std::sin(h) > caustic_tolerance))
    throw CausticError("propagate: sub-step " + std::to_string(h) +
                       " lands within the caustic tolerance and cannot be re-split");
  const double x_bound = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
  if (dx > pi * std::sin(h) / (2.0 * x_bound))
    throw GridError("propagate: grid spacing " + std::to_string(dx) +
                    " cannot resolve the kernel chirp at step " + std::to_string(h) +
                    "; use a finer grid");

  const auto xs = grid.points();
  std::vector<std::complex<double>> cur(psi0.amplitudes().begin(), psi0.amplitudes().end());
  std::vector<std::complex<double>> next(n);
  for (int step = 0; step < n_steps; ++step) {
    const GreenKernel kernel({force.shifted(step * h), h, caustic_tolerance});
    // weighted source column: trapezoidal weights folded into the state
    std::vector<std::complex<double>> src = cur;
    src.front() *= 0.5;
    src.back() *= 0.5;
    for (int i = 0; i < n; ++i) {
      std::complex<double> acc{0.0, 0.0};
      for (int j = 0; j < n; ++j) acc += kernel(xs[i], xs[j]) * src[j];
      next[i] = acc * dx;
    }
    cur.swap(next);
  }
  return states::WaveFunctionGrid(grid, std::move(cur), {1e-3, 1e-6, true});
}

states::WaveFunctionGrid fock_evolution_closed(const states::FockIndex& n,
                                               const dynamics::ForceModel& force, double t,
                                               const GridSpec1D& grid,
                                               double caustic_tolerance) {
  check_direct_window(t, caustic_tolerance, "fock_evolution_closed");
  grid.validate("fock_evolution_closed");
  const dynamics::DriveIntegrals di = dynamics::drive_integrals(force, t);
  const double phase_int = phase_integral(force, t);
  const double cot_t = std::cos(t) / std::sin(t);
  const double global_phase =
      -(n.n + 0.5) * t - 0.5 * (phase_int + di.x_tilde * di.x_tilde * cot_t);
  const double log_norm = -0.5 * (n.n * std::numbers::ln2 + std::lgamma(n.n + 1.0)) -
                          0.25 * std::log(pi);
  std::vector<std::complex<double>> amp(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.point(i);
    const double u = x - di.x_tilde;
    amp[i] = std::exp(log_norm - 0.5 * u * u) * states::hermite(n.n, u) *
             std::exp(iu * (di.p_tilde * x + global_phase));
  }
  return states::WaveFunctionGrid(grid, std::move(amp));
}

void GaussianExponentParams::validate() const {
  if (alpha.real() != 0.0)
    throw ValidationError("GaussianExponentParams: alpha must be purely imaginary");
  if (!std::isfinite(alpha.imag()) || !std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
    throw ValidationError("GaussianExponentParams: parameters must be finite");
}

std::complex<double> hermite_gauss_integral(const GaussianExponentParams& params,
                                            const states::FockIndex& n) {
  params.validate();
  const std::complex<double> alpha = params.alpha;
  const std::complex<double> beta = params.beta;
  const std::complex<double> one_m2a = 1.0 - 2.0 * alpha;
  const std::complex<double> root = std::sqrt(1.0 - 4.0 * alpha * alpha);  // real positive
  const std::complex<double> ratio = (1.0 + 2.0 * alpha) / root;

  std::complex<double> result = std::sqrt(2.0 * pi / one_m2a) *
                                std::exp(beta * beta / (2.0 * one_m2a));
  // i^n, exact by quadrant
  switch (n.n % 4) {
    case 1: result *= iu; break;
    case 2: result *= -1.0; break;
    case 3: result *= -iu; break;
    default: break;
  }
  for (int k = 0; k < n.n; ++k) result *= ratio;
  return result * states::hermite(n.n, -iu * beta / root);
}

}  // namespace tomosc::propagator
