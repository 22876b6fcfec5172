#include "tomosc/grid.hpp"

#include <algorithm>

namespace tomosc {

std::complex<double> interpolate_cubic(const GridSpec1D& grid,
                                       std::span<const std::complex<double>> values, double x) {
  if (x < grid.x_min || x > grid.x_max) return {0.0, 0.0};
  const int n = grid.n_points;
  if (n < 4) throw ValidationError("interpolate_cubic: need at least 4 grid points");
  const double dx = grid.dx();
  double pos = (x - grid.x_min) / dx;
  int j = static_cast<int>(std::floor(pos));
  // 4-point window [j-1, j+2], shifted inward at the edges.
  int lo = std::clamp(j - 1, 0, n - 4);
  double u = pos - lo;  // offset in [0,3] relative to the window start
  // Lagrange basis on nodes 0,1,2,3.
  const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
  const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
  const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
  const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
  return w0 * values[lo] + w1 * values[lo + 1] + w2 * values[lo + 2] + w3 * values[lo + 3];
}

double interpolate_bilinear(const GridSpec2D& grid, std::span<const double> values, double q,
                            double p) {
  if (!grid.contains(q, p)) return 0.0;
  const double fq = (q - grid.q_min) / grid.dq();
  const double fp = (p - grid.p_min) / grid.dp();
  int iq = std::min(static_cast<int>(std::floor(fq)), grid.n_q - 2);
  int ip = std::min(static_cast<int>(std::floor(fp)), grid.n_p - 2);
  const double uq = fq - iq;
  const double up = fp - ip;
  auto v = [&](int a, int b) { return values[static_cast<size_t>(a) * grid.n_p + b]; };
  return (1.0 - uq) * ((1.0 - up) * v(iq, ip) + up * v(iq, ip + 1)) +
         uq * ((1.0 - up) * v(iq + 1, ip) + up * v(iq + 1, ip + 1));
}

double trapezoid(std::span<const double> values, double dx) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * dx;
}

}  // namespace tomosc
