#include "tomosc/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tomosc::states {

WaveFunctionGrid::WaveFunctionGrid(GridSpec1D spec, std::vector<std::complex<double>> amplitudes)
    : WaveFunctionGrid(spec, std::move(amplitudes), Checks{}) {}

WaveFunctionGrid::WaveFunctionGrid(GridSpec1D spec, std::vector<std::complex<double>> amplitudes,
                                   Checks checks)
    : spec_(spec), amp_(std::move(amplitudes)) {
  spec_.validate("WaveFunctionGrid");
  if (static_cast<int>(amp_.size()) != spec_.n_points)
    throw ValidationError("WaveFunctionGrid: amplitude count does not match grid");
  double peak = 0.0;
  for (const auto& a : amp_) {
    if (!detail::finite(a)) throw ValidationError("WaveFunctionGrid: non-finite amplitude");
    peak = std::max(peak, std::abs(a));
  }
  if (checks.require_normalized) {
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > checks.norm_tol)
      throw ValidationError("WaveFunctionGrid: norm^2 = " + std::to_string(n2) +
                            " outside declared tolerance");
    if (peak > 0.0) {
      if (std::abs(amp_.front()) >= checks.endpoint_tol * peak)
        throw GridError("WaveFunctionGrid: state does not fit the box at x_min = " +
                        std::to_string(spec_.x_min));
      if (std::abs(amp_.back()) >= checks.endpoint_tol * peak)
        throw GridError("WaveFunctionGrid: state does not fit the box at x_max = " +
                        std::to_string(spec_.x_max));
    }
  }
}

double WaveFunctionGrid::norm_squared() const {
  double s = 0.5 * (std::norm(amp_.front()) + std::norm(amp_.back()));
  for (size_t i = 1; i + 1 < amp_.size(); ++i) s += std::norm(amp_[i]);
  return s * dx();
}

GridSpec1D default_state_grid() { return {-12.0, 12.0, 2048}; }

WaveFunctionGrid coherent_wavefunction(const CoherentParams& params, const GridSpec1D& grid) {
  grid.validate("coherent_wavefunction");
  if (!std::isfinite(params.x0) || !std::isfinite(params.p0))
    throw ValidationError("coherent_wavefunction: parameters must be finite");
  const double norm = std::pow(std::numbers::pi, -0.25);
  std::vector<std::complex<double>> amp(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.point(i);
    const double d = x - params.x0;
    amp[i] = norm * std::exp(-0.5 * d * d) *
             std::exp(std::complex<double>(0.0, params.p0 * x));
  }
  return WaveFunctionGrid(grid, std::move(amp));
}

WaveFunctionGrid fock_wavefunction(const FockIndex& n, const GridSpec1D& grid) {
  grid.validate("fock_wavefunction");
  const double reach = std::sqrt(2.0 * n.n + 1.0) + 5.0;
  if (grid.x_max < reach || -grid.x_min < reach)
    throw GridError("fock_wavefunction: grid too small for n = " + std::to_string(n.n) +
                    "; need |x| >= " + std::to_string(reach));
  // normalization in log space: 1 / sqrt(2^n n! sqrt(pi))
  const double log_norm =
      -0.5 * (n.n * std::numbers::ln2 + std::lgamma(n.n + 1.0)) - 0.25 * std::log(std::numbers::pi);
  std::vector<std::complex<double>> amp(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.point(i);
    amp[i] = std::exp(log_norm - 0.5 * x * x) * hermite(n.n, x);
  }
  return WaveFunctionGrid(grid, std::move(amp));
}

std::complex<double> overlap(const WaveFunctionGrid& a, const WaveFunctionGrid& b) {
  if (!(a.spec() == b.spec()))
    throw GridError("overlap: wavefunctions live on different grids");
  const auto va = a.amplitudes();
  const auto vb = b.amplitudes();
  std::complex<double> s = 0.5 * (std::conj(va.front()) * vb.front() +
                                  std::conj(va.back()) * vb.back());
  for (size_t i = 1; i + 1 < va.size(); ++i) s += std::conj(va[i]) * vb[i];
  return s * a.dx();
}

}  // namespace tomosc::states
