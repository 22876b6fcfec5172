#include "tomosc/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tomosc/csv.hpp"
#include "tomosc/dynamics.hpp"
#include "tomosc/errors.hpp"
#include "tomosc/phasespace.hpp"
#include "tomosc/propagator.hpp"
#include "tomosc/quadrature.hpp"
#include "tomosc/scenario.hpp"
#include "tomosc/states.hpp"
#include "tomosc/tomography.hpp"

namespace tomosc::verify {
namespace {

namespace dyn = tomosc::dynamics;
namespace st = tomosc::states;
namespace prop = tomosc::propagator;
namespace ph = tomosc::phasespace;
namespace tom = tomosc::tomography;

constexpr double pi = std::numbers::pi;
using cdouble = std::complex<double>;

/// Resolution / sample-count / tolerance profile. Fast mode shrinks grids and
/// sample counts and relaxes every error bound by a factor of ten; negative
/// controls (lower bounds) are never relaxed.
struct Profile {
  double tol_scale;
  int samples;        // random-sample budget for pointwise identities
  int state_points;   // 1-D state grid resolution
  int wigner_points;  // Wigner grid resolution per axis
  int triple_points;  // Wigner resolution for the three-route consistency check
  int fock_span;      // highest number state in the orthonormality scan
  double ode_step;    // reference Runge-Kutta step
};

Profile make_profile(bool fast) {
  if (fast) return {10.0, 60, 1024, 128, 256, 6, 2e-3};
  // 384 points per axis keep the bilinear error of the line-integral checks,
  // which scales with the squared grid spacing, a factor of two under their
  // bounds; 256 points leave the ground-state check right at its threshold.
  return {1.0, 240, 2048, 384, 512, 10, 1e-3};
}

struct Recorder {
  const Profile& prof;
  std::vector<CheckResult>& out;

  void at_most(const std::string& module, const std::string& name, double measured,
               double threshold, const std::string& note = "") {
    const double tol = threshold * prof.tol_scale;
    out.push_back({module, name, measured, tol, true, measured <= tol, note});
  }
  void at_least(const std::string& module, const std::string& name, double measured,
                double threshold, const std::string& note = "") {
    out.push_back({module, name, measured, threshold, false, measured >= threshold, note});
  }
};

/// Classic fixed-step fourth-order Runge-Kutta on a small first-order system.
/// Integrates from t0 to t1 (either direction) in `steps` equal steps.
template <std::size_t N, class Rhs>
std::array<double, N> rk4_integrate(Rhs&& rhs, std::array<double, N> y, double t0, double t1,
                                    int steps) {
  const double h = (t1 - t0) / steps;
  auto shifted = [](const std::array<double, N>& base, const std::array<double, N>& k, double c) {
    std::array<double, N> r{};
    for (std::size_t j = 0; j < N; ++j) r[j] = base[j] + c * k[j];
    return r;
  };
  double tau = t0;
  for (int i = 0; i < steps; ++i) {
    const auto k1 = rhs(tau, y);
    const auto k2 = rhs(tau + 0.5 * h, shifted(y, k1, 0.5 * h));
    const auto k3 = rhs(tau + 0.5 * h, shifted(y, k2, 0.5 * h));
    const auto k4 = rhs(tau + h, shifted(y, k3, h));
    for (std::size_t j = 0; j < N; ++j)
      y[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    tau = t0 + (i + 1) * h;
  }
  return y;
}

/// One force of each kind; the tabulated one covers [-0.1, 13.2].
std::vector<dyn::ForceModel> sample_forces() {
  std::vector<double> ts, vs;
  for (int i = 0; i <= 640; ++i) {
    const double tv = -0.1 + i * (13.3 / 640.0);
    ts.push_back(tv);
    vs.push_back(0.6 * std::sin(1.1 * tv) + 0.2);
  }
  return {dyn::ForceModel::zero(), dyn::ForceModel::constant(0.8),
          dyn::ForceModel::sinusoidal(0.5, 1.3, 0.4),
          dyn::ForceModel::tabulated(std::move(ts), std::move(vs))};
}

// ---------------------------------------------------------------------------
// dynamics
// ---------------------------------------------------------------------------

void dynamics_checks(Recorder& rec, const Profile& prof) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto forces = sample_forces();

  // Flow round trip and symplectic (area-preserving) Jacobian.
  double worst_rt = 0.0, worst_area = 0.0;
  for (const auto& force : forces) {
    for (int k = 0; k < prof.samples / 4; ++k) {
      const double t = 0.05 + (4.0 * pi - 0.15) * unit(rng);
      const double q0 = -3.0 + 6.0 * unit(rng);
      const double p0 = -3.0 + 6.0 * unit(rng);
      const auto z = dyn::classical_trajectory(q0, p0, force, t);
      const auto back = dyn::invariants_q0p0(z, force, t);
      worst_rt = std::max({worst_rt, std::abs(back.q - q0), std::abs(back.p - p0)});

      const double h = 1e-5;
      const auto zqp = dyn::classical_trajectory(q0 + h, p0, force, t);
      const auto zqm = dyn::classical_trajectory(q0 - h, p0, force, t);
      const auto zpp = dyn::classical_trajectory(q0, p0 + h, force, t);
      const auto zpm = dyn::classical_trajectory(q0, p0 - h, force, t);
      const double a = (zqp.q - zqm.q) / (2.0 * h);
      const double b = (zpp.q - zpm.q) / (2.0 * h);
      const double c = (zqp.p - zqm.p) / (2.0 * h);
      const double d = (zpp.p - zpm.p) / (2.0 * h);
      worst_area = std::max(worst_area, std::abs(a * d - b * c - 1.0));
    }
  }
  rec.at_most("dynamics", "flow_round_trip", worst_rt, 1e-12);
  rec.at_most("dynamics", "phase_area_jacobian", worst_area, 1e-8);

  // Drive integrals: x_tilde against direct quadrature of sin(t - tau) f(tau),
  // p_tilde against the time derivative of x_tilde.
  double worst_drive = 0.0;
  for (const auto& force : forces) {
    for (double t : {0.3, 1.0, 2.6, 4.9}) {
      const auto di = dyn::drive_integrals(force, t, 1e-13);
      if (force.closed_form()) {
        const double direct = adaptive_simpson(
            [&](double tau) { return std::sin(t - tau) * force.value(tau); }, 0.0, t, 1e-12);
        worst_drive = std::max(worst_drive, std::abs(direct - di.x_tilde));
      }
      const double h = 1e-4;
      const double xp = dyn::drive_integrals(force, t + h, 1e-13).x_tilde;
      const double xm = dyn::drive_integrals(force, t - h, 1e-13).x_tilde;
      worst_drive = std::max(worst_drive, std::abs((xp - xm) / (2.0 * h) - di.p_tilde));
    }
  }
  rec.at_most("dynamics", "drive_integral_consistency", worst_drive, 1e-7);

  // Trajectories against a fixed-step Runge-Kutta reference.
  double worst_traj = 0.0;
  for (const auto& force : forces) {
    for (double t : {0.7, 2.0, 5.5, 11.0}) {
      for (int k = 0; k < 4; ++k) {
        const double q0 = -2.0 + 4.0 * unit(rng);
        const double p0 = -2.0 + 4.0 * unit(rng);
        const int steps = std::max(1, static_cast<int>(std::ceil(t / prof.ode_step)));
        const auto ref = rk4_integrate<2>(
            [&](double tau, const std::array<double, 2>& y) {
              return std::array<double, 2>{y[1], force.value(tau) - y[0]};
            },
            {q0, p0}, 0.0, t, steps);
        const auto z = dyn::classical_trajectory(q0, p0, force, t);
        worst_traj = std::max({worst_traj, std::abs(z.q - ref[0]), std::abs(z.p - ref[1])});
      }
    }
  }
  rec.at_most("dynamics", "trajectory_reference_ode", worst_traj, 1e-6);

  // Transported density satisfies the Liouville equation (finite differences).
  const dyn::ClassicalDensity rho0{
      [](double q, double p) {
        const double a = q - 0.6, b = p + 0.4;
        const double c2 = q + 1.0, d2 = p - 0.3;
        return 0.7 / (2.0 * pi * 0.25) * std::exp(-(a * a + b * b) / 0.5) +
               0.3 / (2.0 * pi * 0.49) * std::exp(-(c2 * c2 + d2 * d2) / 0.98);
      },
      "gaussian mixture"};
  const auto lforce = dyn::ForceModel::sinusoidal(0.6, 0.9, 0.2);
  const double t_eval = 1.3;
  auto rho_at = [&](double qv, double pv, double tv) {
    return dyn::liouville_evolve(rho0, lforce, tv).density(qv, pv);
  };
  double worst_res = 0.0, max_grad = 0.0;
  const double h = 1e-4;
  for (int k = 0; k < prof.samples; ++k) {
    const double q = -2.5 + 5.0 * unit(rng);
    const double p = -2.5 + 5.0 * unit(rng);
    const double wt = (rho_at(q, p, t_eval + h) - rho_at(q, p, t_eval - h)) / (2.0 * h);
    const double wq = (rho_at(q + h, p, t_eval) - rho_at(q - h, p, t_eval)) / (2.0 * h);
    const double wp = (rho_at(q, p + h, t_eval) - rho_at(q, p - h, t_eval)) / (2.0 * h);
    worst_res = std::max(worst_res, std::abs(wt + p * wq + (lforce.value(t_eval) - q) * wp));
    max_grad = std::max(max_grad, std::abs(wq));
  }
  rec.at_most("dynamics", "liouville_pde_residual", worst_res / max_grad, 1e-4);
}

// ---------------------------------------------------------------------------
// states
// ---------------------------------------------------------------------------

void states_checks(Recorder& rec, const Profile& prof) {
  const GridSpec1D grid{-12.0, 12.0, prof.state_points};

  std::vector<st::WaveFunctionGrid> fock;
  for (int n = 0; n <= prof.fock_span; ++n)
    fock.push_back(st::fock_wavefunction(st::FockIndex(n), grid));

  double worst_on = 0.0;
  for (int m = 0; m <= prof.fock_span; ++m)
    for (int n = m; n <= prof.fock_span; ++n)
      worst_on = std::max(worst_on, std::abs(st::overlap(fock[m], fock[n]) -
                                             (m == n ? cdouble(1.0) : cdouble(0.0))));
  rec.at_most("states", "fock_orthonormality", worst_on, 1e-7);

  double worst_parity = 0.0;
  for (int n : {0, 1, 2, 5, prof.fock_span}) {
    const auto& psi = fock[n];
    const int N = psi.size();
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < N; ++i)
      worst_parity = std::max(worst_parity, std::abs(psi[i] - sign * psi[N - 1 - i]));
  }
  rec.at_most("states", "fock_parity", worst_parity, 1e-10);

  // Hermite recurrence values against explicit closed forms and the
  // factorial series (independent evaluation routes).
  double worst_h = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  for (double x : {-2.0, -0.7, 0.3, 1.1, 1.9}) {
    worst_h = std::max(worst_h, rel(st::hermite(3, x), 8.0 * x * x * x - 12.0 * x));
    worst_h = std::max(worst_h, rel(st::hermite(4, x), 16.0 * std::pow(x, 4) - 48.0 * x * x + 12.0));
    worst_h = std::max(
        worst_h, rel(st::hermite(5, x), 32.0 * std::pow(x, 5) - 160.0 * x * x * x + 120.0 * x));
    for (int n : {8, 12}) {
      // H_n(x) = sum_k (-1)^k n! / (k! (n-2k)!) (2x)^{n-2k}
      long double term = std::pow(static_cast<long double>(2.0 * x), n);
      long double sum = term;
      for (int k = 1; 2 * k <= n; ++k) {
        const int nm = n - 2 * (k - 1);
        term *= -static_cast<long double>(nm) * (nm - 1) /
                (static_cast<long double>(k) * (2.0L * x) * (2.0L * x));
        sum += term;
      }
      worst_h = std::max(worst_h, rel(st::hermite(n, x), static_cast<double>(sum)));
    }
  }
  rec.at_most("states", "hermite_closed_form", worst_h, 1e-12);

  // <H> = n + 1/2 with a five-point Laplacian.
  double worst_e = 0.0;
  const double dx = grid.dx();
  for (int n = 0; n <= 5; ++n) {
    const auto& psi = fock[n];
    const int N = psi.size();
    cdouble acc = 0.0;
    for (int i = 2; i < N - 2; ++i) {
      const cdouble d2 = (-psi[i - 2] + 16.0 * psi[i - 1] - 30.0 * psi[i] + 16.0 * psi[i + 1] -
                          psi[i + 2]) /
                         (12.0 * dx * dx);
      const double x = psi.x(i);
      acc += std::conj(psi[i]) * (-0.5 * d2 + 0.5 * x * x * psi[i]);
    }
    worst_e = std::max(worst_e, std::abs((acc * dx).real() - (n + 0.5)));
  }
  rec.at_most("states", "fock_energy_expectation", worst_e, 1e-4);

  // Coherent states: vacuum is the ground state; overlaps match the Gaussian
  // integral closed form.
  const auto vac = st::coherent_wavefunction({0.0, 0.0}, grid);
  rec.at_most("states", "vacuum_matches_ground", std::abs(st::overlap(vac, fock[0]) - 1.0),
              1e-10);
  rec.at_most("states", "vacuum_excited_orthogonal", std::abs(st::overlap(vac, fock[1])), 1e-10);
  const auto ca = st::coherent_wavefunction({1.0, 0.5}, grid);
  const auto cb = st::coherent_wavefunction({-0.3, 0.2}, grid);
  const cdouble c(1.0 + (-0.3), 0.2 - 0.5);  // x_a + x_b + i (p_b - p_a)
  const cdouble expected = std::exp(0.25 * c * c - 0.5 * (1.0 * 1.0 + 0.3 * 0.3));
  rec.at_most("states", "coherent_overlap", std::abs(st::overlap(ca, cb) - expected), 1e-9);
}

// ---------------------------------------------------------------------------
// propagator
// ---------------------------------------------------------------------------

void propagator_checks(Recorder& rec, const Profile& prof) {
  std::mt19937_64 rng(77001);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const GridSpec1D sgrid{-12.0, 12.0, prof.state_points};

  // |G| (2 pi sin t)^{1/2} = 1 between caustics for every force kind.
  double worst_mod = 0.0;
  for (const auto& force :
       {dyn::ForceModel::zero(), dyn::ForceModel::constant(0.8),
        dyn::ForceModel::sinusoidal(0.5, 1.3, 0.4)}) {
    for (int k = 0; k < prof.samples / 6; ++k) {
      const double t = 0.05 + (pi - 0.1) * unit(rng);
      const prop::GreenKernel kern({force, t});
      const double x = -4.0 + 8.0 * unit(rng);
      const double xp = -4.0 + 8.0 * unit(rng);
      worst_mod = std::max(worst_mod,
                           std::abs(std::abs(kern(x, xp)) * std::sqrt(2.0 * pi * std::sin(t)) - 1.0));
    }
  }
  rec.at_most("propagator", "kernel_modulus", worst_mod, 1e-12);

  // Composition, unitarity, and the time-dependent Schrodinger equation.
  const auto psi0 = st::coherent_wavefunction({0.6, -0.3}, sgrid);
  const auto force = dyn::ForceModel::sinusoidal(0.7, 1.1, 0.3);
  const auto direct = prop::propagate(psi0, force, 1.6);
  const auto leg1 = prop::propagate(psi0, force, 0.7);
  const auto leg2 = prop::propagate(leg1, force.shifted(0.7), 0.9);
  const auto late = prop::propagate(psi0, force, 2.5);
  const cdouble ov = st::overlap(direct, leg2) /
                     std::sqrt(direct.norm_squared() * leg2.norm_squared());
  rec.at_most("propagator", "semigroup_fidelity", std::abs(std::abs(ov) - 1.0), 1e-5);
  double worst_norm = 0.0;
  for (const auto* w : {&direct, &leg1, &leg2, &late})
    worst_norm = std::max(worst_norm, std::abs(w->norm_squared() - 1.0));
  rec.at_most("propagator", "unitarity", worst_norm, 1e-5);

  {
    const double tc = 0.9, ht = 1e-4;
    const auto pm = prop::propagate(psi0, force, tc - ht);
    const auto pc = prop::propagate(psi0, force, tc);
    const auto pp = prop::propagate(psi0, force, tc + ht);
    const double fval = force.value(tc);
    const double dx = sgrid.dx();
    const int N = pc.size();
    double peak = 0.0;
    for (int i = 0; i < N; ++i) peak = std::max(peak, std::abs(pc[i]));
    double worst_sch = 0.0, scale = 0.0;
    for (int i = 2; i < N - 2; ++i) {
      if (std::abs(pc[i]) < 1e-3 * peak) continue;
      const cdouble dt = (pp[i] - pm[i]) / (2.0 * ht);
      const cdouble d2 = (-pc[i - 2] + 16.0 * pc[i - 1] - 30.0 * pc[i] + 16.0 * pc[i + 1] -
                          pc[i + 2]) /
                         (12.0 * dx * dx);
      const double x = pc.x(i);
      const cdouble hpsi = -0.5 * d2 + (0.5 * x * x - fval * x) * pc[i];
      worst_sch = std::max(worst_sch, std::abs(cdouble(0.0, 1.0) * dt - hpsi));
      scale = std::max(scale, std::abs(hpsi));
    }
    rec.at_most("propagator", "schrodinger_residual", worst_sch / scale, 1e-3);
  }

  // Number-basis reconstruction of a smooth state after free evolution.
  {
    const int basis_points = prof.state_points + prof.state_points / 3;
    const GridSpec1D wgrid{-16.0, 16.0, basis_points};
    const auto sm = st::coherent_wavefunction({0.7, -0.4}, wgrid);
    const auto evolved = prop::propagate(sm, dyn::ForceModel::zero(), 1.0);
    double worst_sp = 0.0;
    std::vector<cdouble> coef(41);
    std::vector<st::WaveFunctionGrid> basis;
    for (int n = 0; n <= 40; ++n) {
      basis.push_back(st::fock_wavefunction(st::FockIndex(n), wgrid));
      coef[n] = st::overlap(basis[n], sm);
    }
    for (int j = 0; j <= 120; ++j) {
      const double x = -3.0 + j * 0.05;
      cdouble sum = 0.0;
      for (int n = 0; n <= 40; ++n)
        sum += coef[n] * std::exp(cdouble(0.0, -(n + 0.5) * 1.0)) * basis[n].value_at(x);
      worst_sp = std::max(worst_sp, std::abs(sum - evolved.value_at(x)));
    }
    rec.at_most("propagator", "number_basis_reconstruction", worst_sp, 1e-4);
  }

  // Dedicated constant-force kernel against the general one: equal modulus,
  // equal phase up to one global offset.
  {
    const double f0 = 0.9;
    double worst_cmod = 0.0;
    std::vector<double> deltas;
    for (int k = 0; k < 100; ++k) {
      const double t = 0.1 + 2.9 * unit(rng);
      const double x = -3.0 + 6.0 * unit(rng);
      const double xp = -3.0 + 6.0 * unit(rng);
      const cdouble g = prop::green_function(x, xp, {dyn::ForceModel::constant(f0), t});
      const cdouble gc = prop::green_constant_force(x, xp, f0, t);
      worst_cmod = std::max(worst_cmod, std::abs(std::abs(g) - std::abs(gc)) / std::abs(gc));
      deltas.push_back(std::arg(g / gc));
    }
    double sx = 0.0, sy = 0.0;
    for (double d : deltas) {
      sx += std::cos(d);
      sy += std::sin(d);
    }
    const double offset = std::atan2(sy, sx);
    double worst_ph = 0.0;
    for (double d : deltas)
      worst_ph = std::max(worst_ph, std::abs(std::remainder(d - offset, 2.0 * pi)));
    std::ostringstream note;
    note << "fitted offset " << std::scientific << std::setprecision(2) << offset;
    rec.at_most("propagator", "constant_force_modulus", worst_cmod, 1e-10);
    rec.at_most("propagator", "constant_force_phase", worst_ph, 1e-8, note.str());
  }

  // Small-frequency limit of the scaled kernel against the driven free particle.
  {
    const prop::UnitsConfig units{1.0, 1e-3, 1.0};
    double worst_free = 0.0;
    for (double f0 : {0.0, 0.5}) {
      for (int k = 0; k < 25; ++k) {
        const double x = -2.0 + 4.0 * unit(rng);
        const double xp = -2.0 + 4.0 * unit(rng);
        const cdouble a = prop::green_function_scaled(x, xp, 1.0, f0, units);
        const cdouble b = prop::green_free_limit(x, xp, 1.0, f0, units);
        worst_free = std::max(worst_free, std::abs(a - b) / std::abs(b));
      }
    }
    rec.at_most("propagator", "free_particle_limit", worst_free, 1e-4);
  }

  // Closed-form number-state evolution against quadrature propagation.
  {
    const auto fforce = dyn::ForceModel::constant(0.7);
    double worst_def = 0.0, worst_ph = 0.0;
    const int n_max = prof.tol_scale > 1.0 ? 1 : 2;
    for (int n = 0; n <= n_max; ++n) {
      const auto closed = prop::fock_evolution_closed(st::FockIndex(n), fforce, 1.0, sgrid);
      const auto num = prop::propagate(st::fock_wavefunction(st::FockIndex(n), sgrid), fforce, 1.0);
      const cdouble o = st::overlap(closed, num) /
                        std::sqrt(closed.norm_squared() * num.norm_squared());
      worst_def = std::max(worst_def, std::abs(std::abs(o) - 1.0));
      worst_ph = std::max(worst_ph, std::abs(std::arg(o)));
    }
    rec.at_most("propagator", "number_state_closed_form_fidelity", worst_def, 1e-5);
    rec.at_most("propagator", "number_state_closed_form_phase", worst_ph, 1e-4);
  }

  // Undriven ground state only picks up the zero-point phase.
  {
    const auto g0 = st::fock_wavefunction(st::FockIndex(0), sgrid);
    const auto gt = prop::propagate(g0, dyn::ForceModel::zero(), 0.8);
    const cdouble o = st::overlap(g0, gt);
    rec.at_most("propagator", "ground_state_phase", std::abs(std::arg(o) + 0.4), 1e-5);
    rec.at_most("propagator", "ground_state_fidelity", std::abs(std::abs(o) - 1.0), 1e-6);
  }
}

// ---------------------------------------------------------------------------
// phasespace
// ---------------------------------------------------------------------------

void phasespace_checks(Recorder& rec, const Profile& prof) {
  std::mt19937_64 rng(880011);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const GridSpec1D sgrid{-12.0, 12.0, prof.state_points};
  const GridSpec2D wspec{-8.0, 8.0, -8.0, 8.0, prof.wigner_points, prof.wigner_points};

  // Marginals of the transform against |psi|^2 and its Fourier counterpart.
  double worst_marg = 0.0, worst_int = 0.0, worst_bound = 0.0;
  const auto coh = st::coherent_wavefunction({1.0, 0.5}, sgrid);
  const auto fk2 = st::fock_wavefunction(st::FockIndex(2), sgrid);
  for (const auto* psi : {&coh, &fk2}) {
    const auto W = ph::wigner_from_wavefunction(*psi, wspec);
    worst_int = std::max(worst_int, std::abs(W.integral() - 1.0));
    worst_bound = std::max(worst_bound, W.max_abs() - 1.0 / pi);

    const double dp = wspec.dp(), dq = wspec.dq();
    for (int iq = 0; iq < wspec.n_q; ++iq) {
      double m = 0.0;
      for (int ip = 0; ip < wspec.n_p; ++ip)
        m += W.value(iq, ip) * ((ip == 0 || ip == wspec.n_p - 1) ? 0.5 : 1.0);
      m *= dp;
      worst_marg = std::max(worst_marg, std::abs(m - std::norm(psi->value_at(wspec.q(iq)))));
    }
    // Momentum marginal against the Fourier transform of psi.
    const double dxs = psi->dx();
    for (int ip = 0; ip < wspec.n_p; ++ip) {
      const double p = wspec.p(ip);
      cdouble ft = 0.0;
      for (int i = 0; i < psi->size(); ++i) {
        const double w = (i == 0 || i == psi->size() - 1) ? 0.5 : 1.0;
        ft += w * (*psi)[i] * std::exp(cdouble(0.0, -p * psi->x(i)));
      }
      ft *= dxs / std::sqrt(2.0 * pi);
      double m = 0.0;
      for (int iq = 0; iq < wspec.n_q; ++iq)
        m += W.value(iq, ip) * ((iq == 0 || iq == wspec.n_q - 1) ? 0.5 : 1.0);
      m *= dq;
      worst_marg = std::max(worst_marg, std::abs(m - std::norm(ft)));
    }
  }
  rec.at_most("phasespace", "wigner_marginals", worst_marg, 1e-4);
  rec.at_most("phasespace", "wigner_normalization", worst_int, 1e-4);
  rec.at_most("phasespace", "wigner_magnitude_bound", worst_bound, 1e-6);

  // Evolved classical density and evolved Wigner function coincide pointwise.
  const dyn::ClassicalDensity rho0{
      [](double q, double p) {
        const double a = q - 0.6, b = p + 0.4;
        return std::exp(-(a * a + b * b)) / pi;
      },
      "gaussian"};
  const auto sforce = dyn::ForceModel::sinusoidal(0.6, 0.9, 0.2);
  double worst_co = 0.0;
  for (double t : {0.8, 2.9}) {
    const auto liou = dyn::liouville_evolve(rho0, sforce, t);
    const auto wig = ph::wigner_evolve(rho0.density, sforce, t);
    for (int k = 0; k < prof.samples / 2; ++k) {
      const double q = -3.0 + 6.0 * unit(rng);
      const double p = -3.0 + 6.0 * unit(rng);
      worst_co = std::max(worst_co, std::abs(liou.density(q, p) - wig(q, p)));
    }
  }
  rec.at_most("phasespace", "liouville_wigner_coincidence", worst_co, 1e-12);

  // Phase-space evolution against a fresh transform of the evolved state.
  const auto cforce = dyn::ForceModel::constant(0.7);
  {
    const auto psi_c = st::coherent_wavefunction({1.0, 0.0}, sgrid);
    const auto W0 = ph::wigner_from_wavefunction(psi_c, wspec);
    const auto ev = ph::wigner_evolve(W0, cforce, 1.1);
    const auto Wt = ph::wigner_from_wavefunction(prop::propagate(psi_c, cforce, 1.1), wspec);
    double worst_ev = 0.0;
    for (int iq = 0; iq < wspec.n_q; iq += 3)
      for (int ip = 0; ip < wspec.n_p; ip += 3)
        worst_ev = std::max(worst_ev,
                            std::abs(ev(wspec.q(iq), wspec.p(ip)) - Wt.value(iq, ip)));
    rec.at_most("phasespace", "evolution_matches_transform", worst_ev, 1e-3);
  }

  // The first excited state keeps its -1/pi dip at the transported origin.
  auto w_excited = [](double q, double p) {
    const double s = q * q + p * p;
    return (2.0 * s - 1.0) * std::exp(-s) / pi;
  };
  {
    const double t = 0.9;
    const auto ev = ph::wigner_evolve(w_excited, sforce, t);
    const auto di = dyn::drive_integrals(sforce, t);
    double mn = 1.0;
    for (int i = -50; i <= 50; ++i)
      for (int j = -50; j <= 50; ++j)
        mn = std::min(mn, ev(di.x_tilde + 0.01 * i, di.p_tilde + 0.01 * j));
    rec.at_most("phasespace", "negativity_witness", std::abs(mn + 1.0 / pi), 1e-3);
  }

  // Transport equation residual, plus a control with the drive sign flipped.
  {
    const double t = 0.9;
    auto wig_t = [&](double q, double p, double tv) {
      return ph::wigner_evolve(w_excited, sforce, tv)(q, p);
    };
    const GridSpec2D mgrid{-3.0, 3.0, -3.0, 3.0, 21, 21};
    rec.at_most("phasespace", "transport_pde_residual",
                ph::moyal_residual(wig_t, sforce, t, mgrid), 1e-3);
    const auto bad = dyn::ForceModel::sinusoidal(-0.6, 0.9, 0.2);
    rec.at_least("phasespace", "transport_pde_negative_control",
                 ph::moyal_residual(wig_t, bad, t, mgrid), 0.1);
  }
}

// ---------------------------------------------------------------------------
// tomography
// ---------------------------------------------------------------------------

void tomography_checks(Recorder& rec, const Profile& prof) {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const GridSpec1D sgrid{-12.0, 12.0, prof.state_points};
  const auto xgrid = tom::default_tomogram_grid();

  const auto coh = st::coherent_wavefunction({1.0, 0.5}, sgrid);
  const auto fk2 = st::fock_wavefunction(st::FockIndex(2), sgrid);
  const auto fk3 = st::fock_wavefunction(st::FockIndex(3), sgrid);

  // Quadrature slices: unit mass, nonnegative.
  {
    const std::vector<tom::SymplecticFrame> frames{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.3, -1.2}};
    double worst_norm = 0.0, worst_neg = 0.0;
    for (const auto* psi : {&coh, &fk2, &fk3}) {
      for (const auto& fr : frames) {
        const auto slice = tom::symplectic_from_wavefunction(*psi, fr, xgrid);
        worst_norm = std::max(worst_norm, std::abs(slice.integral() - 1.0));
        worst_neg = std::max(worst_neg, -slice.min_value());
      }
    }
    rec.at_most("tomography", "slice_normalization", worst_norm, 1e-6);
    rec.at_most("tomography", "slice_nonnegativity", worst_neg, 1e-9);
  }

  // Scaling law w(lambda X, lambda mu, lambda nu) = w(X, mu, nu) / lambda.
  // Power-of-two factors reuse the exact same grid values; lambda = 3 is
  // compared where the density is above 1e-6 of its peak.
  {
    const tom::SymplecticFrame fb{0.8, 0.6};
    const auto base = tom::symplectic_from_wavefunction(fk2, fb, xgrid);
    double sup = 0.0;
    for (int i = 0; i < xgrid.n_points; ++i) sup = std::max(sup, base[i]);
    double worst_hom = 0.0;
    for (double lam : {0.5, 2.0, 3.0}) {
      const tom::SymplecticFrame fs{lam * fb.mu, lam * fb.nu};
      const GridSpec1D gs{lam * xgrid.x_min, lam * xgrid.x_max, xgrid.n_points};
      const auto scaled = tom::symplectic_from_wavefunction(fk2, fs, gs);
      for (int i = 0; i < xgrid.n_points; ++i) {
        if (lam == 3.0 && base[i] < 1e-6 * sup) continue;
        worst_hom = std::max(worst_hom, std::abs(lam * scaled[i] - base[i]) /
                                            std::max(base[i], 1e-300));
      }
    }
    rec.at_most("tomography", "frame_scaling_law", worst_hom, 1e-8);
  }

  // Three routes to the evolved tomogram: quadrature on the propagated state,
  // the closed form, and the line integral of the evolved Wigner function.
  {
    const auto cforce = dyn::ForceModel::constant(0.7);
    const double t = 1.0;
    const GridSpec2D big{-8.0, 8.0, -8.0, 8.0, prof.triple_points, prof.triple_points};
    const std::vector<tom::SymplecticFrame> frames{
        {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.3, -1.2}};
    double worst_triple = 0.0;
    const std::vector<tom::StateSpec> specs{st::CoherentParams{1.0, 0.5}, st::FockIndex(2)};
    for (const auto& spec : specs) {
      const auto psi0 = std::holds_alternative<st::CoherentParams>(spec)
                            ? st::coherent_wavefunction(std::get<st::CoherentParams>(spec), sgrid)
                            : st::fock_wavefunction(std::get<st::FockIndex>(spec), sgrid);
      const auto psit = prop::propagate(psi0, cforce, t);
      const auto W0 = ph::wigner_from_wavefunction(psi0, big);
      const auto Wt = ph::sample_to_grid(ph::wigner_evolve(W0, cforce, t), big, 1e-3);
      for (const auto& fr : frames) {
        const auto a = tom::symplectic_from_wavefunction(psit, fr, xgrid);
        const auto b = tom::closed_form_tomogram(spec, cforce, t, fr, xgrid);
        const auto c = tom::radon_from_wigner(Wt, fr, xgrid);
        for (int i = 0; i < xgrid.n_points; ++i)
          worst_triple = std::max({worst_triple, std::abs(a[i] - b[i]), std::abs(a[i] - c[i])});
      }
    }
    rec.at_most("tomography", "triple_route_consistency", worst_triple, 1e-3);
  }

  // Shipped frame pullback against characteristics of the transport equation.
  {
    const auto sforce = dyn::ForceModel::sinusoidal(0.5, 1.3, 0.4);
    double worst_c = 0.0;
    for (int k = 0; k < prof.samples; ++k) {
      const double X = -4.0 + 8.0 * unit(rng);
      double mu = 0.0, nu = 0.0;
      do {
        mu = -2.0 + 4.0 * unit(rng);
        nu = -2.0 + 4.0 * unit(rng);
      } while (mu * mu + nu * nu < 0.04);
      const double t = 0.1 + (2.0 * pi - 0.1) * unit(rng);
      const auto pre = tom::evolution_preimage(X, {mu, nu}, sforce, t);
      const int steps = std::max(1, static_cast<int>(std::ceil(t / prof.ode_step)));
      const auto y = rk4_integrate<3>(
          [&](double s, const std::array<double, 3>& v) {
            return std::array<double, 3>{v[2] * sforce.value(s), v[2], -v[1]};
          },
          {X, mu, nu}, t, 0.0, steps);
      worst_c = std::max({worst_c, std::abs(pre.X0 - y[0]), std::abs(pre.mu0 - y[1]),
                          std::abs(pre.nu0 - y[2])});
    }
    rec.at_most("tomography", "evolution_characteristics", worst_c, 1e-12);
  }

  // The rotated-frame route is the exact restriction of the symplectic one.
  {
    double worst_o = 0.0;
    for (double theta : {0.0, 0.7, 2.0, 4.5}) {
      const tom::OpticalAngle ang(theta);
      const auto a = tom::optical_tomogram(coh, ang, xgrid);
      const auto b = tom::symplectic_from_wavefunction(coh, ang.frame(), xgrid);
      for (int i = 0; i < xgrid.n_points; ++i)
        worst_o = std::max(worst_o, std::abs(a[i] - b[i]));
    }
    rec.at_most("tomography", "optical_restriction", worst_o, 1e-12);
  }

  // Angle-shift evolution of the rotated-frame tomogram against the closed form.
  {
    const auto cforce = dyn::ForceModel::constant(0.7);
    const double t = 1.0;
    const tom::StateSpec spec = st::CoherentParams{1.0, 0.5};
    tom::OpticalEvaluator w0 = [&](double X, double th) {
      return tom::closed_form_tomogram_value(spec, cforce, 0.0,
                                             {std::cos(th), std::sin(th)}, X);
    };
    const auto ev = tom::optical_evolve(w0, cforce, t);
    double worst = 0.0;
    for (int k = 0; k < prof.samples / 2; ++k) {
      const double X = -4.0 + 8.0 * unit(rng);
      const double th = 2.0 * pi * unit(rng);
      const double direct =
          tom::closed_form_tomogram_value(spec, cforce, t, {std::cos(th), std::sin(th)}, X);
      worst = std::max(worst, std::abs(ev(X, th) - direct));
    }
    rec.at_most("tomography", "optical_evolution_consistency", worst, 1e-10);
  }

  // Line-integral route against closed forms for the lowest states.
  {
    const GridSpec2D wspec{-8.0, 8.0, -8.0, 8.0, prof.wigner_points, prof.wigner_points};
    const auto Wg =
        ph::wigner_from_wavefunction(st::coherent_wavefunction({0.0, 0.0}, sgrid), wspec);
    double worst_g = 0.0;
    for (const auto& fr : {tom::SymplecticFrame{1.0, 0.0}, tom::SymplecticFrame{0.6, 0.8}}) {
      const auto slice = tom::radon_from_wigner(Wg, fr, xgrid);
      for (int i = 0; i < xgrid.n_points; ++i) {
        const double X = xgrid.point(i);
        worst_g = std::max(worst_g, std::abs(slice[i] - std::exp(-X * X) / std::sqrt(pi)));
      }
    }
    rec.at_most("tomography", "radon_ground_state", worst_g, 5e-4);

    const auto W1 = ph::wigner_from_wavefunction(st::fock_wavefunction(st::FockIndex(1), sgrid),
                                                 wspec);
    const tom::SymplecticFrame fr1{0.6, 0.8};
    const auto s1 = tom::radon_from_wigner(W1, fr1, xgrid);
    double worst_1 = 0.0;
    for (int i = 0; i < xgrid.n_points; ++i)
      worst_1 = std::max(worst_1,
                         std::abs(s1[i] - tom::closed_form_tomogram_value(
                                              st::FockIndex(1), dyn::ForceModel::zero(), 0.0, fr1,
                                              xgrid.point(i))));
    rec.at_most("tomography", "radon_first_excited", worst_1, 1e-3);

    // Power-of-two scaling reuses the same marching line exactly.
    const tom::SymplecticFrame fb{0.8, 0.6};
    const tom::SymplecticFrame fs{2.0 * fb.mu, 2.0 * fb.nu};
    const GridSpec1D gs{2.0 * xgrid.x_min, 2.0 * xgrid.x_max, xgrid.n_points};
    const auto rb = tom::radon_from_wigner(Wg, fb, xgrid);
    const auto rs = tom::radon_from_wigner(Wg, fs, gs);
    double worst_rh = 0.0;
    for (int i = 0; i < xgrid.n_points; ++i)
      worst_rh = std::max(worst_rh, std::abs(2.0 * rs[i] - rb[i]));
    rec.at_most("tomography", "radon_scaling_law", worst_rh, 1e-12);
  }

  // Transport equation in the frame variables, plus sign-flip controls.
  {
    const auto cforce = dyn::ForceModel::constant(0.7);
    const auto bad = dyn::ForceModel::constant(-0.7);
    const double t = 0.9;
    const tom::StateSpec spec = st::FockIndex(2);
    auto w4 = [&](double X, double mu, double nu, double tv) {
      return tom::closed_form_tomogram_value(spec, cforce, tv, {mu, nu}, X);
    };
    std::vector<std::array<double, 3>> pts;
    for (int k = 0; k < 60; ++k) {
      const double ang = 2.0 * pi * unit(rng);
      const double r = 0.7 + 1.0 * unit(rng);
      double nu = r * std::sin(ang);
      if (std::abs(nu) < 0.5) nu = nu < 0.0 ? -0.5 : 0.5;
      pts.push_back({-3.0 + 6.0 * unit(rng), r * std::cos(ang), nu});
    }
    rec.at_most("tomography", "frame_pde_residual",
                tom::tomographic_pde_residual(w4, cforce, t, pts), 1e-3);
    rec.at_least("tomography", "frame_pde_negative_control",
                 tom::tomographic_pde_residual(w4, bad, t, pts), 0.1);

    auto w3 = [&](double X, double th, double tv) {
      return tom::closed_form_tomogram_value(spec, cforce, tv, {std::cos(th), std::sin(th)}, X);
    };
    std::vector<std::array<double, 2>> opts;
    for (int k = 0; k < 60; ++k)
      opts.push_back({-3.0 + 6.0 * unit(rng), 0.4 + 2.3 * unit(rng)});
    rec.at_most("tomography", "angle_pde_residual",
                tom::optical_pde_residual(w3, cforce, t, opts), 1e-3);
    rec.at_least("tomography", "angle_pde_negative_control",
                 tom::optical_pde_residual(w3, bad, t, opts), 0.1);
  }
}

// ---------------------------------------------------------------------------
// cli
// ---------------------------------------------------------------------------

void cli_checks(Recorder& rec, const Profile&) {
  namespace fs = std::filesystem;
  const std::string config = R"json({
    "force": {"kind": "constant", "f0": 0.7},
    "state": {"kind": "coherent", "x0": 1.0, "p0": 0.0},
    "times": [0.0, 1.0],
    "representations": ["wavefunction", "symplectic", "optical"],
    "frames": [[1.0, 0.0], [0.3, -1.2]],
    "angles": [0.0, 1.5707963267948966],
    "grids": {
      "state": {"min": -12.0, "max": 12.0, "points": 512},
      "tomogram": {"min": -10.0, "max": 10.0, "points": 401}
    }
  })json";

  const fs::path tmp = fs::temp_directory_path() / "tomosc-verify-cli";
  std::error_code ec;
  fs::remove_all(tmp, ec);

  auto read_file = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  double mismatches = 1.0, manifest_bad = 1.0;
  try {
    const auto scen = cli::parse_scenario(config);
    const auto r1 = cli::run_scenario(scen, tmp / "a");
    const auto r2 = cli::run_scenario(scen, tmp / "b");
    mismatches = 0.0;
    if (r1.files.size() != r2.files.size()) mismatches += 1.0;
    for (std::size_t i = 0; i < r1.files.size() && i < r2.files.size(); ++i)
      if (read_file(r1.files[i]) != read_file(r2.files[i])) mismatches += 1.0;
    if (read_file(r1.manifest) != read_file(r2.manifest)) mismatches += 1.0;

    // Manifest: complete file list with matching checksums.
    manifest_bad = 0.0;
    const auto manifest = nlohmann::json::parse(read_file(r1.manifest));
    std::vector<std::string> listed;
    for (const auto& entry : manifest.at("files")) {
      const std::string name = entry.at("name").get<std::string>();
      listed.push_back(name);
      std::ostringstream hex;
      hex << std::hex << std::setw(16) << std::setfill('0')
          << io::fnv1a64_file(tmp / "a" / name);
      if (entry.at("fnv1a64").get<std::string>() != hex.str()) manifest_bad += 1.0;
    }
    for (const auto& f : r1.files) {
      const std::string name = f.filename().string();
      if (std::find(listed.begin(), listed.end(), name) == listed.end()) manifest_bad += 1.0;
    }
  } catch (const Error&) {
    // leave the failure counters set
  }
  rec.at_most("cli", "run_determinism", mismatches, 0.0);
  rec.at_most("cli", "manifest_checksums", manifest_bad, 0.0);

  // Config errors must name the offending key.
  double named = 1.0;
  try {
    cli::parse_scenario(R"({"force": {"kind": "zero"}, "times": [0.0],
                            "representations": ["wavefunction"]})");
  } catch (const ConfigError& e) {
    if (std::string(e.what()).find("state") != std::string::npos) named = 0.0;
  }
  rec.at_most("cli", "config_error_names_key", named, 0.0);

  // A caustic output time must still propagate (via sub-steps).
  double caustic_ok = 1.0;
  try {
    const std::string cc = R"json({
      "force": {"kind": "constant", "f0": 0.5},
      "state": {"kind": "coherent", "x0": 1.0, "p0": 0.0},
      "times": [3.141592653589793],
      "representations": ["wavefunction"],
      "grids": {"state": {"min": -12.0, "max": 12.0, "points": 512}}
    })json";
    const auto r = cli::run_scenario(cli::parse_scenario(cc), tmp / "c");
    if (!r.files.empty() && fs::file_size(r.files.front()) > 0) caustic_ok = 0.0;
  } catch (const Error&) {
  }
  rec.at_most("cli", "caustic_time_propagation", caustic_ok, 0.0);

  fs::remove_all(tmp, ec);
}

}  // namespace

std::vector<CheckResult> run_all(const Options& options) {
  const Profile prof = make_profile(options.fast);
  std::vector<CheckResult> out;
  Recorder rec{prof, out};
  dynamics_checks(rec, prof);
  states_checks(rec, prof);
  propagator_checks(rec, prof);
  phasespace_checks(rec, prof);
  tomography_checks(rec, prof);
  cli_checks(rec, prof);
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

void print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  os << std::left << std::setw(12) << "module" << std::setw(36) << "check" << std::setw(13)
     << "measured" << std::setw(4) << "" << std::setw(13) << "threshold" << "result\n";
  int passed = 0;
  for (const auto& r : results) {
    std::ostringstream meas, thr;
    meas << std::scientific << std::setprecision(3) << r.measured;
    thr << std::scientific << std::setprecision(3) << r.threshold;
    os << std::left << std::setw(12) << r.module << std::setw(36) << r.name << std::setw(13)
       << meas.str() << std::setw(4) << (r.require_at_most ? "<=" : ">=") << std::setw(13)
       << thr.str() << (r.pass ? "PASS" : "FAIL");
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << "\n";
    if (r.pass) ++passed;
  }
  os << passed << " of " << results.size() << " checks passed\n";
}

}  // namespace tomosc::verify
