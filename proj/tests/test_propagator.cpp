#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "tomosc/errors.hpp"
#include "tomosc/propagator.hpp"
#include "tomosc/states.hpp"

using namespace tomosc;
using dynamics::ForceModel;
using std::complex;
constexpr double pi = std::numbers::pi;

namespace {

// Classical action of the driven free particle obtained by extremizing the
// time-sliced discrete action over the interior path points (tridiagonal
// solve), independent of any closed-form action formula.
double discrete_free_action(double x_from, double x_to, double t, double f0, double mass, int n) {
  const double h = t / n;
  // With S = sum_k [ m ((x_{k+1}-x_k)/h)^2 h / 2 + h f0 (x_k + x_{k+1}) / 2 ],
  // stationarity in the interior points gives the tridiagonal system
  //   x_{k-1} - 2 x_k + x_{k+1} = h^2 f0 / m.
  std::vector<double> diag(n - 1, -2.0), rhs(n - 1, h * h * f0 / mass), x(n - 1);
  rhs[0] -= x_from;
  rhs[n - 2] -= x_to;
  // Thomas algorithm with unit off-diagonals.
  std::vector<double> c(n - 1);
  c[0] = 1.0 / diag[0];
  rhs[0] /= diag[0];
  for (int k = 1; k < n - 1; ++k) {
    const double m_ = diag[k] - c[k - 1];
    c[k] = 1.0 / m_;
    rhs[k] = (rhs[k] - rhs[k - 1]) / m_;
  }
  x[n - 2] = rhs[n - 2];
  for (int k = n - 3; k >= 0; --k) x[k] = rhs[k] - c[k] * x[k + 1];

  double s = 0.0;
  double prev = x_from;
  for (int k = 1; k <= n; ++k) {
    const double cur = (k == n) ? x_to : x[k - 1];
    const double v = (cur - prev) / h;
    s += 0.5 * mass * v * v * h + h * f0 * 0.5 * (prev + cur);
    prev = cur;
  }
  return s;
}

}  // namespace

TEST_CASE("the accumulated quadratic drive phase matches frozen and quadrature references") {
  // Constant f0 = 1, t = 1: integral of tan^2(tau/2) = 2 tan(1/2) - 1.
  const double v = propagator::phase_integral(ForceModel::constant(1.0), 1.0);
  CHECK(std::abs(v - 0.092604979687581027) < 1e-9);

  const ForceModel f = ForceModel::sinusoidal(0.8, 1.7, 0.3);
  const double t = 2.1;
  auto integrand = [&](double tau) {
    const double s = std::sin(tau);
    const double F = dynamics::drive_integrals(f, tau).F;
    return F * F / (s * s);
  };
  // The integrand vanishes quadratically at tau -> 0; the clipped head
  // contributes O(1e-18).
  const double ref = oracles::romberg(integrand, 1e-6, t, 13);
  CHECK(std::abs(propagator::phase_integral(f, t) - ref) < 1e-7);

  CHECK_THROWS_AS(propagator::phase_integral(f, 3.2), CausticError);
  CHECK_THROWS_AS(propagator::phase_integral(f, 0.0), CausticError);
}

TEST_CASE("kernel modulus is the caustic prefactor") {
  const propagator::GreenKernelParams params{ForceModel::sinusoidal(0.9, 1.3, 0.0), 1.0, 1e-6};
  const propagator::GreenKernel kernel(params);
  for (double x : {-1.7, 0.0, 2.3})
    for (double xp : {-0.4, 1.1})
      CHECK(std::abs(std::abs(kernel(x, xp)) - 0.43490108695058905) < 1e-12);
  CHECK(kernel.drive().t == 1.0);
  CHECK(kernel.phase_integral_value() ==
        doctest::Approx(propagator::phase_integral(params.force, 1.0)).epsilon(1e-12));
}

TEST_CASE("the undriven kernel is symmetric in its arguments") {
  const propagator::GreenKernelParams params{ForceModel::zero(), 0.8, 1e-6};
  const propagator::GreenKernel kernel(params);
  CHECK(std::abs(kernel(1.3, -0.4) - kernel(-0.4, 1.3)) < 1e-15);
}

TEST_CASE("kernel evaluation refuses caustics and bad windows") {
  using propagator::green_function;
  CHECK_THROWS_AS(green_function(0.1, 0.2, {ForceModel::zero(), 3.2, 1e-6}), CausticError);
  CHECK_THROWS_AS(green_function(0.1, 0.2, {ForceModel::zero(), pi - 1e-9, 1e-6}), CausticError);
  CHECK_THROWS_AS(green_function(0.1, 0.2, {ForceModel::zero(), 0.0, 1e-6}), CausticError);
  CHECK_THROWS_AS(green_function(0.1, 0.2, {ForceModel::zero(), -0.5, 1e-6}), CausticError);
}

TEST_CASE("dedicated constant-force kernel equals the general kernel") {
  // The two expressions are algebraically identical (no phase offset), so the
  // comparison is direct, limited only by the quadrature of the phase term.
  const double f0 = 0.9;
  std::mt19937 rng(4321);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), ut(0.1, 3.0);
  for (int k = 0; k < 40; ++k) {
    const double x = ux(rng), xp = ux(rng), t = ut(rng);
    const auto general = propagator::green_function(x, xp, {ForceModel::constant(f0), t, 1e-6});
    const auto dedicated = propagator::green_constant_force(x, xp, f0, t);
    CHECK(std::abs(general - dedicated) < 1e-9);
  }
}

TEST_CASE("scaled kernel at unit constants reduces to the constant-force kernel") {
  const propagator::UnitsConfig units{};
  for (double x : {-0.9, 0.4}) {
    const auto a = propagator::green_function_scaled(x, 0.3, 1.0, 0.5, units);
    const auto b = propagator::green_constant_force(x, 0.3, 0.5, 1.0);
    CHECK(std::abs(a - b) < 1e-14);
  }
}

TEST_CASE("free-limit kernel phase matches the discrete-action oracle") {
  const propagator::UnitsConfig units{1.4, 1.0, 1.0};  // omega is unused in the limit form
  const double t = 1.0;
  for (double f0 : {0.0, 0.7}) {
    for (auto [x, xp] : std::vector<std::pair<double, double>>{{0.7, -0.3}, {1.9, 1.1}}) {
      const auto g = propagator::green_free_limit(x, xp, t, f0, units);
      CHECK(std::abs(std::abs(g) - std::sqrt(units.mass / (2.0 * pi * units.hbar * t))) < 1e-12);
      const double s_cl = discrete_free_action(xp, x, t, f0, units.mass, 4000);
      const double expected = s_cl / units.hbar - pi / 4.0;
      CHECK(std::abs(oracles::wrap_angle(std::arg(g) - expected)) < 1e-6);
    }
  }
  CHECK_THROWS_AS(propagator::green_free_limit(0.1, 0.2, 0.0, 0.5, units), ValidationError);
}

TEST_CASE("scaled kernel approaches the free limit as omega -> 0") {
  const propagator::UnitsConfig units{1.0, 1e-3, 1.0};
  for (double f0 : {0.0, 0.5}) {
    for (double x : {-1.2, 0.4, 2.0}) {
      const auto scaled = propagator::green_function_scaled(x, 0.5, 1.0, f0, units);
      const auto free = propagator::green_free_limit(x, 0.5, 1.0, f0, units);
      CHECK(std::abs(scaled - free) / std::abs(free) < 1e-4);
    }
  }
}

TEST_CASE("quadrature propagation preserves the norm") {
  const auto psi0 = states::coherent_wavefunction({1.0, -0.5});
  const auto psi1 = propagator::propagate(psi0, ForceModel::sinusoidal(0.5, 1.3, 0.4), 1.1);
  CHECK(std::abs(psi1.norm_squared() - 1.0) < 1e-6);
}

TEST_CASE("propagation composes under the shifted-force semigroup") {
  const ForceModel f = ForceModel::sinusoidal(0.5, 1.3, 0.4);
  const auto psi0 = states::coherent_wavefunction({1.0, -0.5});
  const auto a = propagator::propagate(psi0, f, 0.7);
  const auto two_leg = propagator::propagate(a, f.shifted(0.7), 0.9);
  const auto direct = propagator::propagate(psi0, f, 1.6);
  const auto ov = states::overlap(two_leg, direct);
  CHECK(std::abs(ov - complex<double>(1.0, 0.0)) < 1e-5);
}

TEST_CASE("a half rotation is exactly parity times a quarter-phase") {
  // At t = pi the evolution acts as -i times coordinate reflection; the
  // propagation must get both the substep composition and the phases right.
  const auto psi0 = states::coherent_wavefunction({0.8, -0.6});
  const auto out = propagator::propagate(psi0, ForceModel::zero(), pi);
  const auto reflected = states::coherent_wavefunction({-0.8, 0.6});
  const auto ov = states::overlap(reflected, out);
  CHECK(std::abs(ov - complex<double>(0.0, -1.0)) < 2e-5);
}

TEST_CASE("undriven coherent states stay coherent on the classical orbit") {
  const double t = 0.9, x0 = 1.0, p0 = 0.5;
  const auto out = propagator::propagate(states::coherent_wavefunction({x0, p0}),
                                         ForceModel::zero(), t);
  const double xc = x0 * std::cos(t) + p0 * std::sin(t);
  const double pc = p0 * std::cos(t) - x0 * std::sin(t);

  double max_shape_err = 0.0, mean_x = 0.0, mean_p = 0.0;
  const int n = out.size();
  const double dx = out.dx();
  for (int i = 0; i < n; ++i) {
    const double x = out.x(i);
    const double dens = std::norm(out[i]);
    max_shape_err = std::max(
        max_shape_err, std::abs(dens - std::exp(-(x - xc) * (x - xc)) / std::sqrt(pi)));
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    mean_x += w * x * dens;
    // Fourth-order stencil: the second-order one biases <p> by (dx^2/6)<p^3>,
    // which is larger than the propagation error under test.
    if (i > 1 && i + 2 < n) {
      const auto dpsi =
          (-out[i + 2] + 8.0 * out[i + 1] - 8.0 * out[i - 1] + out[i - 2]) / (12.0 * dx);
      mean_p += std::imag(std::conj(out[i]) * dpsi);
    }
  }
  mean_x *= dx;
  mean_p *= dx;
  CHECK(max_shape_err < 1e-6);
  CHECK(std::abs(mean_x - xc) < 1e-6);
  CHECK(std::abs(mean_p - pc) < 1e-5);
}

TEST_CASE("closed-form number-state evolution agrees with quadrature propagation") {
  const ForceModel f = ForceModel::constant(0.7);
  const double t = 1.0;
  for (int n : {0, 1, 2}) {
    const auto closed = propagator::fock_evolution_closed(states::FockIndex(n), f, t);
    const auto quad = propagator::propagate(states::fock_wavefunction(states::FockIndex(n)), f, t);
    const auto ov = states::overlap(closed, quad);
    CHECK(std::abs(ov) > 1.0 - 1e-5);
    CHECK(std::abs(std::arg(ov)) < 1e-4);
  }
}

TEST_CASE("undriven ground-state evolution only rotates the global phase") {
  const double t = 0.4;
  const auto out = propagator::propagate(states::fock_wavefunction(states::FockIndex(0)),
                                         ForceModel::zero(), t);
  const auto ref = states::fock_wavefunction(states::FockIndex(0));
  const complex<double> phase = std::exp(complex<double>(0.0, -0.5 * t));
  double worst = 0.0;
  for (int i = 0; i < out.size(); ++i)
    worst = std::max(worst, std::abs(out[i] - phase * ref[i]));
  CHECK(worst < 1e-6);
}

TEST_CASE("propagation validates its time argument and grid resolution") {
  const auto psi = states::coherent_wavefunction({1.0, 0.0});
  CHECK_THROWS_AS(propagator::propagate(psi, ForceModel::zero(), 0.0), ValidationError);
  CHECK_THROWS_AS(propagator::propagate(psi, ForceModel::zero(), -0.3), ValidationError);

  const auto coarse = states::coherent_wavefunction({1.0, 0.0}, GridSpec1D{-12.0, 12.0, 128});
  try {
    propagator::propagate(coarse, ForceModel::zero(), 0.5);
    FAIL("expected GridError");
  } catch (const GridError& e) {
    CHECK(std::string(e.what()).find("finer grid") != std::string::npos);
  }
}

TEST_CASE("Gaussian-Hermite moments match the complex quadrature oracle") {
  propagator::GaussianExponentParams params;
  params.alpha = complex<double>(0.0, 0.3);
  params.beta = complex<double>(0.2, -0.1);
  for (int n : {0, 1, 3}) {
    const auto closed = propagator::hermite_gauss_integral(params, states::FockIndex(n));
    const auto ref = oracles::romberg(
        [&](double x) {
          return std::exp((complex<double>(-0.5, 0.0) + params.alpha) * x * x + params.beta * x) *
                 states::hermite(n, complex<double>(x, 0.0));
        },
        -14.0, 14.0, 18);
    CHECK(std::abs(closed - ref) < 1e-9 * std::abs(ref));
  }

  propagator::GaussianExponentParams bad;
  bad.alpha = complex<double>(0.1, 0.3);
  CHECK_THROWS_AS(propagator::hermite_gauss_integral(bad, states::FockIndex(0)), ValidationError);
}

TEST_CASE("units must be positive") {
  CHECK_THROWS_AS((propagator::UnitsConfig{0.0, 1.0, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((propagator::UnitsConfig{1.0, -2.0, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((propagator::UnitsConfig{1.0, 1.0, 0.0}.validate()), ValidationError);
  CHECK_NOTHROW((propagator::UnitsConfig{2.0, 0.5, 3.0}.validate()));
}
