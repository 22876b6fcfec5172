#include "tomosc/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "tomosc/errors.hpp"

namespace tomosc::tomography {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace

SymplecticFrame::SymplecticFrame(double mu_, double nu_) : mu(mu_), nu(nu_) {
  if (!std::isfinite(mu) || !std::isfinite(nu))
    throw ValidationError("SymplecticFrame: components must be finite");
  if (mu == 0.0 && nu == 0.0) throw ValidationError("SymplecticFrame: (0,0) is not a frame");
}

OpticalAngle::OpticalAngle(double theta_) {
  if (!std::isfinite(theta_)) throw ValidationError("OpticalAngle: angle must be finite");
  theta = std::fmod(theta_, two_pi);
  if (theta < 0.0) theta += two_pi;
}

SymplecticFrame OpticalAngle::frame() const {
  return SymplecticFrame(std::cos(theta), std::sin(theta));
}

TomogramSlice::TomogramSlice(FrameLabel frame, GridSpec1D grid, std::vector<double> density)
    : TomogramSlice(std::move(frame), grid, std::move(density), Checks{}, false) {}

TomogramSlice::TomogramSlice(FrameLabel frame, GridSpec1D grid, std::vector<double> density,
                             Checks checks, bool boundary_warning)
    : frame_(frame), grid_(grid), density_(std::move(density)), boundary_warning_(boundary_warning) {
  grid_.validate("TomogramSlice");
  if (static_cast<int>(density_.size()) != grid_.n_points)
    throw ValidationError("TomogramSlice: density count does not match grid");
  for (double d : density_) {
    if (!std::isfinite(d)) throw ValidationError("TomogramSlice: non-finite density");
    if (d < -checks.negativity_tol)
      throw ValidationError("TomogramSlice: density " + std::to_string(d) +
                            " below the declared negativity tolerance");
  }
  const double total = integral();
  if (std::abs(total - 1.0) > checks.norm_tol)
    throw ValidationError("TomogramSlice: integral = " + std::to_string(total) +
                          " outside declared tolerance");
}

double TomogramSlice::min_value() const {
  return *std::min_element(density_.begin(), density_.end());
}

GridSpec1D default_tomogram_grid() { return {-10.0, 10.0, 1001}; }

TomogramSlice symplectic_from_wavefunction(const states::WaveFunctionGrid& psi,
                                           const SymplecticFrame& frame,
                                           const GridSpec1D& x_grid) {
  x_grid.validate("symplectic_from_wavefunction");
  const double mu = frame.mu, nu = frame.nu;
  std::vector<double> dens(x_grid.n_points);

  if (std::abs(nu) <= nu_floor(frame)) {
    // degenerate frame: w(X) = |psi(X/mu)|^2 / |mu|
    for (int i = 0; i < x_grid.n_points; ++i)
      dens[i] = std::norm(psi.value_at(x_grid.point(i) / mu)) / std::abs(mu);
    return TomogramSlice(frame, x_grid, std::move(dens));
  }

  const GridSpec1D& sg = psi.spec();
  const double dy = psi.dx();
  const double y_bound = std::max(std::abs(sg.x_min), std::abs(sg.x_max));
  const double x_bound = std::max(std::abs(x_grid.x_min), std::abs(x_grid.x_max));
  // worst phase advance of the chirp between adjacent samples
  const double max_step = dy * (std::abs(mu) * y_bound + x_bound) / std::abs(nu);
  if (max_step > pi / 3.0)
    throw GridError("symplectic_from_wavefunction: state grid cannot resolve the frame chirp "
                    "(phase step " + std::to_string(max_step) + " rad); use a finer grid");

  // chirp factor and trapezoidal weights folded into the state once per frame
  const int n = sg.n_points;
  std::vector<std::complex<double>> base(n);
  std::vector<double> ys(n);
  for (int j = 0; j < n; ++j) {
    const double y = sg.point(j);
    ys[j] = y;
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    base[j] = psi[j] * std::exp(std::complex<double>(0.0, mu * y * y / (2.0 * nu))) * (w * dy);
  }
  const double prefactor = 1.0 / (two_pi * std::abs(nu));
  for (int i = 0; i < x_grid.n_points; ++i) {
    const double k = x_grid.point(i) / nu;
    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < n; ++j)
      acc += base[j] * std::exp(std::complex<double>(0.0, -k * ys[j]));
    dens[i] = std::norm(acc) * prefactor;
  }
  return TomogramSlice(frame, x_grid, std::move(dens));
}

double closed_form_tomogram_value(const StateSpec& state, const dynamics::ForceModel& force,
                                  double t, const SymplecticFrame& frame, double X) {
  const double r2 = frame.r2();
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, states::CoherentParams>) {
          const dynamics::PhasePoint qp = dynamics::classical_trajectory(s.x0, s.p0, force, t);
          const double d = X - frame.mu * qp.q - frame.nu * qp.p;
          return std::exp(-d * d / r2) / std::sqrt(pi * r2);
        } else {
          const dynamics::DriveIntegrals di = dynamics::drive_integrals(force, t);
          const double Y =
              (X - frame.mu * di.x_tilde - frame.nu * di.p_tilde) / std::sqrt(r2);
          const double log_norm = -(s.n * std::numbers::ln2 + std::lgamma(s.n + 1.0)) -
                                  0.5 * std::log(pi) - 0.5 * std::log(r2);
          const double h = states::hermite(s.n, Y);
          return std::exp(log_norm - Y * Y) * h * h;
        }
      },
      state);
}

TomogramSlice closed_form_tomogram(const StateSpec& state, const dynamics::ForceModel& force,
                                   double t, const SymplecticFrame& frame,
                                   const GridSpec1D& x_grid) {
  x_grid.validate("closed_form_tomogram");
  std::vector<double> dens(x_grid.n_points);
  for (int i = 0; i < x_grid.n_points; ++i)
    dens[i] = closed_form_tomogram_value(state, force, t, frame, x_grid.point(i));
  return TomogramSlice(frame, x_grid, std::move(dens));
}

FramePreimage evolution_preimage(double X, const SymplecticFrame& frame,
                                 const dynamics::ForceModel& force, double t) {
  const dynamics::DriveIntegrals di = dynamics::drive_integrals(force, t);
  const double c = std::cos(t), s = std::sin(t);
  return {X - frame.mu * di.x_tilde - frame.nu * di.p_tilde, frame.mu * c - frame.nu * s,
          frame.nu * c + frame.mu * s};
}

TomogramEvaluator tomogram_evolve(TomogramEvaluator w0, const dynamics::ForceModel& force,
                                  double t) {
  if (!w0) throw ValidationError("tomogram_evolve: empty evaluator");
  const dynamics::DriveIntegrals di = dynamics::drive_integrals(force, t);
  const double c = std::cos(t), s = std::sin(t);
  return [w0 = std::move(w0), di, c, s](double X, double mu, double nu) {
    return w0(X - mu * di.x_tilde - nu * di.p_tilde, mu * c - nu * s, nu * c + mu * s);
  };
}

TomogramSlice optical_tomogram(const states::WaveFunctionGrid& psi, const OpticalAngle& angle,
                               const GridSpec1D& x_grid) {
  TomogramSlice s = symplectic_from_wavefunction(psi, angle.frame(), x_grid);
  return TomogramSlice(angle, s.grid(), std::vector<double>(s.density().begin(),
                                                            s.density().end()));
}

OpticalEvaluator optical_evolve(OpticalEvaluator w0, const dynamics::ForceModel& force,
                                double t) {
  if (!w0) throw ValidationError("optical_evolve: empty evaluator");
  const dynamics::DriveIntegrals di = dynamics::drive_integrals(force, t);
  return [w0 = std::move(w0), di, t](double X, double theta) {
    return w0(X - di.x_tilde * std::cos(theta) - di.p_tilde * std::sin(theta), theta + t);
  };
}

TomogramSlice closed_form_optical(const StateSpec& state, const dynamics::ForceModel& force,
                                  double t, const OpticalAngle& angle, const GridSpec1D& x_grid) {
  x_grid.validate("closed_form_optical");
  const SymplecticFrame frame = angle.frame();
  std::vector<double> dens(x_grid.n_points);
  for (int i = 0; i < x_grid.n_points; ++i)
    dens[i] = closed_form_tomogram_value(state, force, t, frame, x_grid.point(i));
  return TomogramSlice(angle, x_grid, std::move(dens));
}

TomogramSlice radon_from_wigner(const phasespace::WignerGrid& w, const SymplecticFrame& frame,
                                const GridSpec1D& x_grid) {
  x_grid.validate("radon_from_wigner");
  const GridSpec2D& g = w.spec();
  const double r = std::sqrt(frame.r2());
  const double ds = 0.5 * std::min(g.dq(), g.dp());
  const double dir_q = -frame.nu / r, dir_p = frame.mu / r;

  std::vector<double> dens(x_grid.n_points, 0.0);
  bool warn = false;
  for (int i = 0; i < x_grid.n_points; ++i) {
    const double X = x_grid.point(i);
    const double base_q = frame.mu * X / (r * r), base_p = frame.nu * X / (r * r);
    // clip the line to the grid box (slab intersection)
    double s0 = -std::numeric_limits<double>::infinity();
    double s1 = std::numeric_limits<double>::infinity();
    auto clip = [&](double b, double d, double lo, double hi) -> bool {
      if (std::abs(d) < 1e-300) return b >= lo && b <= hi;
      double a0 = (lo - b) / d, a1 = (hi - b) / d;
      if (a0 > a1) std::swap(a0, a1);
      s0 = std::max(s0, a0);
      s1 = std::min(s1, a1);
      return true;
    };
    if (!clip(base_q, dir_q, g.q_min, g.q_max) || !clip(base_p, dir_p, g.p_min, g.p_max) ||
        !(s0 < s1)) {
      continue;  // line misses the grid entirely
    }
    const int n_steps = std::max(2, static_cast<int>(std::ceil((s1 - s0) / ds)) + 1);
    const double step = (s1 - s0) / (n_steps - 1);
    double acc = 0.0;
    for (int k = 0; k < n_steps; ++k) {
      const double s = s0 + k * step;
      const double wk = (k == 0 || k == n_steps - 1) ? 0.5 : 1.0;
      acc += wk * w.at(base_q + s * dir_q, base_p + s * dir_p);
    }
    dens[i] = acc * step / r;
    const double tail = std::abs(w.at(base_q + s0 * dir_q, base_p + s0 * dir_p)) +
                        std::abs(w.at(base_q + s1 * dir_q, base_p + s1 * dir_p));
    if (tail > 1e-4) warn = true;
  }
  // interpolation-level tolerances for the Radon route
  return TomogramSlice(frame, x_grid, std::move(dens), {1e-4, 1e-3}, warn);
}

double tomographic_pde_residual(const std::function<double(double, double, double, double)>& w,
                                const dynamics::ForceModel& force, double t,
                                const std::vector<std::array<double, 3>>& points,
                                double fd_step) {
  if (points.empty()) throw ValidationError("tomographic_pde_residual: no sample points");
  const double h = fd_step;
  const double f_t = force.value(t);
  double worst = 0.0, grad_scale = 0.0;
  for (const auto& [X, mu, nu] : points) {
    const double wt = (w(X, mu, nu, t + h) - w(X, mu, nu, t - h)) / (2.0 * h);
    const double wX = (w(X + h, mu, nu, t) - w(X - h, mu, nu, t)) / (2.0 * h);
    const double wmu = (w(X, mu + h, nu, t) - w(X, mu - h, nu, t)) / (2.0 * h);
    const double wnu = (w(X, mu, nu + h, t) - w(X, mu, nu - h, t)) / (2.0 * h);
    worst = std::max(worst, std::abs(wt - mu * wnu + nu * wmu + nu * f_t * wX));
    grad_scale = std::max(grad_scale, std::abs(wX));
  }
  if (grad_scale == 0.0) return 0.0;
  return worst / grad_scale;
}

double optical_pde_residual(const std::function<double(double, double, double)>& w,
                            const dynamics::ForceModel& force, double t,
                            const std::vector<std::array<double, 2>>& points, double fd_step) {
  if (points.empty()) throw ValidationError("optical_pde_residual: no sample points");
  const double h = fd_step;
  const double f_t = force.value(t);
  double worst = 0.0, grad_scale = 0.0;
  for (const auto& [X, theta] : points) {
    const double wt = (w(X, theta, t + h) - w(X, theta, t - h)) / (2.0 * h);
    const double wX = (w(X + h, theta, t) - w(X - h, theta, t)) / (2.0 * h);
    const double wth = (w(X, theta + h, t) - w(X, theta - h, t)) / (2.0 * h);
    worst = std::max(worst, std::abs(wt - wth + f_t * std::sin(theta) * wX));
    grad_scale = std::max(grad_scale, std::abs(wX));
  }
  if (grad_scale == 0.0) return 0.0;
  return worst / grad_scale;
}

}  // namespace tomosc::tomography
