#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <variant>
#include <vector>

#include "tomosc/dynamics.hpp"
#include "tomosc/phasespace.hpp"
#include "tomosc/states.hpp"

namespace tomosc::tomography {

/// Quadrature frame X = mu q + nu p. (0,0) is rejected.
struct SymplecticFrame {
  double mu = 1.0;
  double nu = 0.0;
  SymplecticFrame(double mu_, double nu_);
  double r2() const { return mu * mu + nu * nu; }
};

/// Frame angle for the optical restriction mu = cos theta, nu = sin theta,
/// canonicalized to [0, 2 pi).
struct OpticalAngle {
  double theta = 0.0;
  explicit OpticalAngle(double theta_);
  SymplecticFrame frame() const;
};

using FrameLabel = std::variant<SymplecticFrame, OpticalAngle>;

/// Marginal density of one frame sampled on a uniform X grid. Construction
/// validates unit normalization and nonnegativity within the declared
/// tolerances (quadrature routes keep the strict defaults; the Radon route
/// constructs with relaxed interpolation-level tolerances).
class TomogramSlice {
 public:
  struct Checks {
    double norm_tol = 1e-6;
    double negativity_tol = 1e-12;
  };

  TomogramSlice(FrameLabel frame, GridSpec1D grid, std::vector<double> density);
  TomogramSlice(FrameLabel frame, GridSpec1D grid, std::vector<double> density, Checks checks,
                bool boundary_warning = false);

  const FrameLabel& frame() const { return frame_; }
  const GridSpec1D& grid() const { return grid_; }
  std::span<const double> density() const { return density_; }
  double operator[](int i) const { return density_[i]; }

  double integral() const { return trapezoid(density_, grid_.dx()); }
  double min_value() const;
  /// Set by the Radon route when a line leaves the source grid with
  /// non-negligible estimated mass.
  bool boundary_warning() const { return boundary_warning_; }

 private:
  FrameLabel frame_;
  GridSpec1D grid_;
  std::vector<double> density_;
  bool boundary_warning_;
};

GridSpec1D default_tomogram_grid();  // [-10, 10], 1001 points

/// Fraction of the frame norm below which the nu -> 0 analytic branch applies.
inline double nu_floor(const SymplecticFrame& f) { return 1e-6 * std::sqrt(f.r2()); }

/// Homodyne marginal of a sampled state:
///   w(X, mu, nu) = (1/(2 pi |nu|)) | integral psi(y) e^{i mu y^2/(2 nu) - i X y/nu} dy |^2,
/// falling back to |psi(X/mu)|^2 / |mu| when |nu| is below the floor.
/// The state's grid must resolve the chirp; otherwise a GridError suggests a
/// finer grid.
TomogramSlice symplectic_from_wavefunction(const states::WaveFunctionGrid& psi,
                                           const SymplecticFrame& frame,
                                           const GridSpec1D& x_grid = default_tomogram_grid());

/// Initial state kinds with closed-form evolved tomograms.
using StateSpec = std::variant<states::CoherentParams, states::FockIndex>;

/// Closed-form evolved tomogram value:
///   coherent: (pi r^2)^{-1/2} exp(-(X - mu x_cl(t) - nu p_cl(t))^2 / r^2)
///   fock:     (2^n n! sqrt(pi))^{-1} r^{-1} exp(-Y^2) H_n(Y)^2,
///             Y = (X - mu x_tilde - nu p_tilde)/r,  r^2 = mu^2 + nu^2
double closed_form_tomogram_value(const StateSpec& state, const dynamics::ForceModel& force,
                                  double t, const SymplecticFrame& frame, double X);

TomogramSlice closed_form_tomogram(const StateSpec& state, const dynamics::ForceModel& force,
                                   double t, const SymplecticFrame& frame,
                                   const GridSpec1D& x_grid = default_tomogram_grid());

/// Pullback of a tomogram under the drive: the frame and quadrature that the
/// initial tomogram is evaluated at,
///   X0  = X - mu x_tilde(t) - nu p_tilde(t)
///   mu0 = mu cos t - nu sin t
///   nu0 = nu cos t + mu sin t
struct FramePreimage {
  double X0;
  double mu0;
  double nu0;
};
FramePreimage evolution_preimage(double X, const SymplecticFrame& frame,
                                 const dynamics::ForceModel& force, double t);

using TomogramEvaluator = std::function<double(double X, double mu, double nu)>;

/// w(X, mu, nu, t) = w0(X0, mu0, nu0) with the preimage above.
TomogramEvaluator tomogram_evolve(TomogramEvaluator w0, const dynamics::ForceModel& force,
                                  double t);

/// Optical restriction of the homodyne marginal (same code path as the
/// symplectic route at frame (cos theta, sin theta)).
TomogramSlice optical_tomogram(const states::WaveFunctionGrid& psi, const OpticalAngle& angle,
                               const GridSpec1D& x_grid = default_tomogram_grid());

/// Optical evolution: w(X, theta, t) = w0(X - x_tilde cos theta - p_tilde sin theta, theta + t).
using OpticalEvaluator = std::function<double(double X, double theta)>;
OpticalEvaluator optical_evolve(OpticalEvaluator w0, const dynamics::ForceModel& force, double t);

TomogramSlice closed_form_optical(const StateSpec& state, const dynamics::ForceModel& force,
                                  double t, const OpticalAngle& angle,
                                  const GridSpec1D& x_grid = default_tomogram_grid());

/// Radon transform of a Wigner grid:
///   w(X, mu, nu) = (1/r) integral W(base + s dir) ds along mu q + nu p = X,
/// marched at half the grid spacing with bilinear interpolation. Slices carry
/// a boundary warning when a clipped line endpoint still sees |W| mass above
/// 1e-4.
TomogramSlice radon_from_wigner(const phasespace::WignerGrid& w, const SymplecticFrame& frame,
                                const GridSpec1D& x_grid = default_tomogram_grid());

/// Max central-difference residual of
///   dw/dt - mu dw/dnu + nu dw/dmu + nu f(t) dw/dX = 0
/// over the sample points (X, mu, nu), normalized by max |dw/dX|.
double tomographic_pde_residual(const std::function<double(double, double, double, double)>& w,
                                const dynamics::ForceModel& force, double t,
                                const std::vector<std::array<double, 3>>& points,
                                double fd_step = 1e-4);

/// Optical counterpart: dw/dt - dw/dtheta + f(t) sin(theta) dw/dX = 0.
double optical_pde_residual(const std::function<double(double, double, double)>& w,
                            const dynamics::ForceModel& force, double t,
                            const std::vector<std::array<double, 2>>& points,
                            double fd_step = 1e-4);

}  // namespace tomosc::tomography
