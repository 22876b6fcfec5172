#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "tomosc/dynamics.hpp"
#include "tomosc/states.hpp"

namespace tomosc::phasespace {

/// Real Wigner values on a uniform phase-space grid, row-major in q.
/// Construction validates normalization (within norm_tol), the bound
/// |W| <= 1/pi + 1e-6, and finiteness.
class WignerGrid {
 public:
  WignerGrid(GridSpec2D spec, std::vector<double> values, double norm_tol = 1e-4);

  const GridSpec2D& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  double value(int iq, int ip) const { return values_[static_cast<size_t>(iq) * spec_.n_p + ip]; }

  /// Bilinear interpolation; zero outside the grid.
  double at(double q, double p) const { return interpolate_bilinear(spec_, values_, q, p); }

  /// Trapezoidal integral over the grid.
  double integral() const;
  double min_value() const;
  double max_abs() const;

 private:
  GridSpec2D spec_;
  std::vector<double> values_;
};

GridSpec2D default_wigner_grid();  // [-8, 8]^2, 256 x 256

/// Wigner transform of a sampled state:
///   W(q,p) = (1/pi) integral psi*(q+y) psi(q-y) e^{2ipy} dy.
/// The y quadrature runs at half the state's grid spacing; the imaginary
/// residue of the transform must stay below 1e-10. The requested q range must
/// lie inside the state's box.
WignerGrid wigner_from_wavefunction(const states::WaveFunctionGrid& psi, const GridSpec2D& grid);
WignerGrid wigner_from_wavefunction(const states::WaveFunctionGrid& psi);

/// Evolved Wigner function as a callable. When the source is a sampled grid,
/// points that pull back outside the source domain evaluate to zero and raise
/// the out-of-domain flag.
class WignerEvaluator {
 public:
  WignerEvaluator(std::function<double(double, double)> base, const dynamics::DriveIntegrals& di);
  double operator()(double q, double p) const;
  bool out_of_domain_seen() const { return flag_ && flag_->load(); }

 private:
  friend WignerEvaluator wigner_evolve(const WignerGrid&, const dynamics::ForceModel&, double);
  std::function<double(double, double)> base_;
  double cos_t_, sin_t_, F_, J_;
  std::shared_ptr<std::atomic<bool>> flag_;
};

/// Composition with the classical flow:
///   W(q, p, t) = W0(q cos t - p sin t + F(t), q sin t + p cos t - J(t)).
WignerEvaluator wigner_evolve(const WignerGrid& w0, const dynamics::ForceModel& force, double t);
WignerEvaluator wigner_evolve(std::function<double(double, double)> w0,
                              const dynamics::ForceModel& force, double t);

/// Sample an evaluator onto a grid (with the grid's construction checks).
WignerGrid sample_to_grid(const WignerEvaluator& w, const GridSpec2D& grid,
                          double norm_tol = 1e-4);

/// Max central-difference residual of
///   dW/dt + p dW/dq + (f(t) - q) dW/dp = 0
/// over the test grid, normalized by max |dW/dq|. The evaluator must support
/// (q, p, t) in a neighborhood of the grid and time t.
double moyal_residual(const std::function<double(double, double, double)>& wigner,
                      const dynamics::ForceModel& force, double t, const GridSpec2D& test_grid,
                      double fd_step = 1e-4);

}  // namespace tomosc::phasespace
