#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "tomosc/errors.hpp"
#include "tomosc/grid.hpp"

namespace tomosc::states {

inline constexpr int max_fock_order = 50;

/// Number-state index, restricted to the supported order range.
struct FockIndex {
  int n = 0;
  explicit FockIndex(int n_) : n(n_) {
    if (n < 0 || n > max_fock_order)
      throw ValidationError("FockIndex: n must lie in [0, " + std::to_string(max_fock_order) +
                            "]");
  }
};

struct CoherentParams {
  double x0 = 0.0;
  double p0 = 0.0;
};

namespace detail {
inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}
}  // namespace detail

/// Physicists' Hermite polynomial H_n via the three-term recurrence
/// H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x). Works for real and complex x.
template <class T>
T hermite(int n, T x) {
  if (n < 0 || n > max_fock_order)
    throw ValidationError("hermite: order out of range [0, " + std::to_string(max_fock_order) +
                          "]");
  T h0 = T{1};
  if (n == 0) return h0;
  T h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    T h2 = 2.0 * x * h1 - 2.0 * static_cast<double>(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  if (!detail::finite(h1)) throw Error("hermite: overflow for the given order and argument");
  return h1;
}

/// Complex amplitudes sampled on a uniform grid.
///
/// Construction validates structure and, when requested, that the state is
/// normalized within norm_tol and decays at the box edges (the endpoint
/// amplitudes must stay below endpoint_tol times the peak).
class WaveFunctionGrid {
 public:
  struct Checks {
    double norm_tol = 1e-6;
    double endpoint_tol = 1e-8;
    bool require_normalized = true;
  };

  WaveFunctionGrid(GridSpec1D spec, std::vector<std::complex<double>> amplitudes);
  WaveFunctionGrid(GridSpec1D spec, std::vector<std::complex<double>> amplitudes, Checks checks);

  const GridSpec1D& spec() const { return spec_; }
  int size() const { return spec_.n_points; }
  double dx() const { return spec_.dx(); }
  double x(int i) const { return spec_.point(i); }
  std::span<const std::complex<double>> amplitudes() const { return amp_; }
  const std::complex<double>& operator[](int i) const { return amp_[i]; }

  /// Cubic interpolation between samples; zero outside the box.
  std::complex<double> value_at(double xv) const { return interpolate_cubic(spec_, amp_, xv); }

  /// Grid norm^2 (trapezoidal).
  double norm_squared() const;

 private:
  GridSpec1D spec_;
  std::vector<std::complex<double>> amp_;
};

GridSpec1D default_state_grid();  // [-12, 12], 2048 points

/// psi(x) = pi^{-1/4} exp(-(x-x0)^2/2 + i p0 x), sampled on the grid.
WaveFunctionGrid coherent_wavefunction(const CoherentParams& params,
                                       const GridSpec1D& grid = default_state_grid());

/// psi_n(x) = (2^n n! sqrt(pi))^{-1/2} exp(-x^2/2) H_n(x), sampled on the grid.
/// The grid must reach past the classical turning points: |x| >= sqrt(2n+1) + 5.
WaveFunctionGrid fock_wavefunction(const FockIndex& n,
                                   const GridSpec1D& grid = default_state_grid());

/// Trapezoidal inner product <a|b> on identical grids.
std::complex<double> overlap(const WaveFunctionGrid& a, const WaveFunctionGrid& b);

}  // namespace tomosc::states
