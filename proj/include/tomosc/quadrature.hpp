#pragma once

#include <cmath>
#include <complex>

#include "tomosc/errors.hpp"

namespace tomosc {

/// Adaptive Simpson quadrature with an absolute-error target.
///
/// The integrand may return double or std::complex<double>. Panels are split
/// until the local Richardson estimate |S_fine - S_coarse|/15 meets its share
/// of the tolerance; panels that hit the depth limit contribute their estimate
/// to the achieved-error tally. Throws QuadratureError (carrying the best value
/// and achieved estimate) if the total estimate misses the request.
template <class F>
auto adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 40) {
  using Value = decltype(f(a));
  if (!(abs_tol > 0.0)) throw ValidationError("adaptive_simpson: tolerance must be positive");
  if (a == b) return Value{};

  double leaked = 0.0;  // error estimate from panels that hit the depth limit

  auto simpson = [](Value fa, Value fm, Value fb, double h) {
    return (h / 6.0) * (fa + 4.0 * fm + fb);
  };

  auto recurse = [&](auto&& self, double lo, double hi, Value flo, Value fmid, Value fhi,
                     Value whole, double tol, int depth) -> Value {
    const double m = 0.5 * (lo + hi);
    const Value fl = f(0.5 * (lo + m));
    const Value fr = f(0.5 * (m + hi));
    const Value left = simpson(flo, fl, fmid, m - lo);
    const Value right = simpson(fmid, fr, fhi, hi - m);
    const Value refined = left + right;
    const double err = std::abs(refined - whole) / 15.0;
    if (err <= tol || depth >= max_depth) {
      if (err > tol) leaked += err;
      return refined + (refined - whole) / 15.0;
    }
    return self(self, lo, m, flo, fl, fmid, left, 0.5 * tol, depth + 1) +
           self(self, m, hi, fmid, fr, fhi, right, 0.5 * tol, depth + 1);
  };

  const Value fa = f(a);
  const Value fm = f(0.5 * (a + b));
  const Value fb = f(b);
  const Value whole = simpson(fa, fm, fb, b - a);
  const Value result = recurse(recurse, a, b, fa, fm, fb, whole, abs_tol, 0);
  if (leaked > abs_tol) {
    throw QuadratureError("adaptive_simpson: requested tolerance not reached", std::abs(result),
                          leaked);
  }
  return result;
}

}  // namespace tomosc
