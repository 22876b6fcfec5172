#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "tomosc/errors.hpp"

namespace tomosc {

/// Uniform 1-D grid, endpoints inclusive.
struct GridSpec1D {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;

  void validate(const char* what) const {
    if (n_points < 2) throw ValidationError(std::string(what) + ": need at least 2 grid points");
    if (!(x_max > x_min)) throw ValidationError(std::string(what) + ": x_max must exceed x_min");
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
      throw ValidationError(std::string(what) + ": non-finite grid bounds");
  }
  double dx() const { return (x_max - x_min) / (n_points - 1); }
  double point(int i) const { return x_min + i * dx(); }
  std::vector<double> points() const {
    std::vector<double> xs(n_points);
    for (int i = 0; i < n_points; ++i) xs[i] = point(i);
    return xs;
  }
  bool operator==(const GridSpec1D&) const = default;
};

/// Uniform 2-D phase-space grid, endpoints inclusive, values row-major in q.
struct GridSpec2D {
  double q_min = 0.0, q_max = 0.0;
  double p_min = 0.0, p_max = 0.0;
  int n_q = 0, n_p = 0;

  void validate(const char* what) const {
    if (n_q < 2 || n_p < 2) throw ValidationError(std::string(what) + ": need at least 2x2 grid points");
    if (!(q_max > q_min) || !(p_max > p_min))
      throw ValidationError(std::string(what) + ": grid bounds must be increasing");
  }
  double dq() const { return (q_max - q_min) / (n_q - 1); }
  double dp() const { return (p_max - p_min) / (n_p - 1); }
  double q(int i) const { return q_min + i * dq(); }
  double p(int j) const { return p_min + j * dp(); }
  bool contains(double qv, double pv) const {
    return qv >= q_min && qv <= q_max && pv >= p_min && pv <= p_max;
  }
  bool operator==(const GridSpec2D&) const = default;
};

/// Cubic (4-point Lagrange) interpolation of uniformly sampled complex data.
/// Returns 0 outside the sampled interval.
std::complex<double> interpolate_cubic(const GridSpec1D& grid,
                                       std::span<const std::complex<double>> values, double x);

/// Bilinear interpolation of row-major 2-D data. Returns 0 outside the grid.
double interpolate_bilinear(const GridSpec2D& grid, std::span<const double> values, double q,
                            double p);

/// Trapezoidal integral of uniformly sampled data.
double trapezoid(std::span<const double> values, double dx);

}  // namespace tomosc
