#include "tomosc/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "tomosc/errors.hpp"

namespace tomosc::phasespace {

namespace {
constexpr double pi = std::numbers::pi;
}

WignerGrid::WignerGrid(GridSpec2D spec, std::vector<double> values, double norm_tol)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate("WignerGrid");
  if (values_.size() != static_cast<size_t>(spec_.n_q) * spec_.n_p)
    throw ValidationError("WignerGrid: value count does not match grid");
  const double bound = 1.0 / pi + 1e-6;
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("WignerGrid: non-finite value");
    if (std::abs(v) > bound)
      throw ValidationError("WignerGrid: value exceeds the 1/pi magnitude bound");
  }
  const double total = integral();
  if (std::abs(total - 1.0) > norm_tol)
    throw ValidationError("WignerGrid: integral = " + std::to_string(total) +
                          " outside declared tolerance");
}

double WignerGrid::integral() const {
  double total = 0.0;
  for (int iq = 0; iq < spec_.n_q; ++iq) {
    const double wq = (iq == 0 || iq == spec_.n_q - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (int ip = 0; ip < spec_.n_p; ++ip) {
      const double wp = (ip == 0 || ip == spec_.n_p - 1) ? 0.5 : 1.0;
      row += wp * value(iq, ip);
    }
    total += wq * row;
  }
  return total * spec_.dq() * spec_.dp();
}

double WignerGrid::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double WignerGrid::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridSpec2D default_wigner_grid() { return {-8.0, 8.0, -8.0, 8.0, 256, 256}; }

WignerGrid wigner_from_wavefunction(const states::WaveFunctionGrid& psi, const GridSpec2D& grid) {
  grid.validate("wigner_from_wavefunction");
  const GridSpec1D& sg = psi.spec();
  if (grid.q_min < sg.x_min || grid.q_max > sg.x_max)
    throw GridError("wigner_from_wavefunction: q range exceeds the state's box");

  // Symmetric correlation offsets at half the state's spacing.
  const double dy = 0.5 * psi.dx();
  const int half = sg.n_points - 1;
  const int n_y = 2 * half + 1;
  std::vector<double> ys(n_y);
  for (int j = 0; j < n_y; ++j) ys[j] = (j - half) * dy;

  // Fourier phase table, reused across q rows.
  std::vector<std::complex<double>> phases(static_cast<size_t>(grid.n_p) * n_y);
  for (int ip = 0; ip < grid.n_p; ++ip) {
    const double p = grid.p(ip);
    for (int j = 0; j < n_y; ++j)
      phases[static_cast<size_t>(ip) * n_y + j] =
          std::exp(std::complex<double>(0.0, 2.0 * p * ys[j]));
  }

  std::vector<double> values(static_cast<size_t>(grid.n_q) * grid.n_p);
  std::vector<std::complex<double>> corr(n_y);
  double max_imag = 0.0;
  for (int iq = 0; iq < grid.n_q; ++iq) {
    const double q = grid.q(iq);
    for (int j = 0; j < n_y; ++j) {
      const double w = (j == 0 || j == n_y - 1) ? 0.5 : 1.0;
      corr[j] = std::conj(psi.value_at(q + ys[j])) * psi.value_at(q - ys[j]) * (w * dy / pi);
    }
    for (int ip = 0; ip < grid.n_p; ++ip) {
      const std::complex<double>* ph = &phases[static_cast<size_t>(ip) * n_y];
      std::complex<double> acc{0.0, 0.0};
      for (int j = 0; j < n_y; ++j) acc += corr[j] * ph[j];
      values[static_cast<size_t>(iq) * grid.n_p + ip] = acc.real();
      max_imag = std::max(max_imag, std::abs(acc.imag()));
    }
  }
  if (max_imag >= 1e-10)
    throw ValidationError("wigner_from_wavefunction: imaginary residue " +
                          std::to_string(max_imag) + " exceeds 1e-10");
  return WignerGrid(grid, std::move(values));
}

WignerGrid wigner_from_wavefunction(const states::WaveFunctionGrid& psi) {
  return wigner_from_wavefunction(psi, default_wigner_grid());
}

WignerEvaluator::WignerEvaluator(std::function<double(double, double)> base,
                                 const dynamics::DriveIntegrals& di)
    : base_(std::move(base)),
      cos_t_(std::cos(di.t)),
      sin_t_(std::sin(di.t)),
      F_(di.F),
      J_(di.J) {}

double WignerEvaluator::operator()(double q, double p) const {
  const double q0 = q * cos_t_ - p * sin_t_ + F_;
  const double p0 = q * sin_t_ + p * cos_t_ - J_;
  return base_(q0, p0);
}

WignerEvaluator wigner_evolve(const WignerGrid& w0, const dynamics::ForceModel& force, double t) {
  auto flag = std::make_shared<std::atomic<bool>>(false);
  // copy the grid so the evaluator owns its source
  auto grid = std::make_shared<WignerGrid>(w0);
  WignerEvaluator ev(
      [grid, flag](double q, double p) {
        if (!grid->spec().contains(q, p)) {
          flag->store(true);
          return 0.0;
        }
        return grid->at(q, p);
      },
      dynamics::drive_integrals(force, t));
  ev.flag_ = flag;
  return ev;
}

WignerEvaluator wigner_evolve(std::function<double(double, double)> w0,
                              const dynamics::ForceModel& force, double t) {
  return WignerEvaluator(std::move(w0), dynamics::drive_integrals(force, t));
}

WignerGrid sample_to_grid(const WignerEvaluator& w, const GridSpec2D& grid, double norm_tol) {
  grid.validate("sample_to_grid");
  std::vector<double> values(static_cast<size_t>(grid.n_q) * grid.n_p);
  for (int iq = 0; iq < grid.n_q; ++iq)
    for (int ip = 0; ip < grid.n_p; ++ip)
      values[static_cast<size_t>(iq) * grid.n_p + ip] = w(grid.q(iq), grid.p(ip));
  return WignerGrid(grid, std::move(values), norm_tol);
}

double moyal_residual(const std::function<double(double, double, double)>& wigner,
                      const dynamics::ForceModel& force, double t, const GridSpec2D& test_grid,
                      double fd_step) {
  test_grid.validate("moyal_residual");
  const double h = fd_step;
  const double f_t = force.value(t);
  double worst = 0.0;
  double grad_scale = 0.0;
  for (int iq = 0; iq < test_grid.n_q; ++iq) {
    const double q = test_grid.q(iq);
    for (int ip = 0; ip < test_grid.n_p; ++ip) {
      const double p = test_grid.p(ip);
      const double wt = (wigner(q, p, t + h) - wigner(q, p, t - h)) / (2.0 * h);
      const double wq = (wigner(q + h, p, t) - wigner(q - h, p, t)) / (2.0 * h);
      const double wp = (wigner(q, p + h, t) - wigner(q, p - h, t)) / (2.0 * h);
      worst = std::max(worst, std::abs(wt + p * wq + (f_t - q) * wp));
      grad_scale = std::max(grad_scale, std::abs(wq));
    }
  }
  if (grad_scale == 0.0) return 0.0;
  return worst / grad_scale;
}

}  // namespace tomosc::phasespace
