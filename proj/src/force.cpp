#include "tomosc/force.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tomosc/errors.hpp"

namespace tomosc::dynamics {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ForceModel::ForceModel(Variant v) : v_(std::move(v)) {}

ForceModel ForceModel::zero() { return ForceModel(ZeroForce{}); }

ForceModel ForceModel::constant(double f0) {
  if (!std::isfinite(f0)) throw ValidationError("constant force: f0 must be finite");
  return ForceModel(ConstantForce{f0});
}

ForceModel ForceModel::sinusoidal(double amplitude, double frequency, double phase) {
  if (!std::isfinite(amplitude) || !std::isfinite(frequency) || !std::isfinite(phase))
    throw ValidationError("sinusoidal force: parameters must be finite");
  return ForceModel(SinusoidalForce{amplitude, frequency, phase});
}

ForceModel ForceModel::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size())
    throw ValidationError("tabulated force: times and values must have equal length");
  if (times.size() < 2) throw ValidationError("tabulated force: need at least 2 samples");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
      throw ValidationError("tabulated force: non-finite sample");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ValidationError("tabulated force: times must be strictly increasing");
  }
  if (times.front() > 0.0)
    throw ValidationError("tabulated force: samples must start at t <= 0 to cover the origin");
  return ForceModel(TabulatedForce{std::move(times), std::move(values)});
}

double ForceModel::value(double t) const {
  return std::visit(
      [t](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroForce>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ConstantForce>) {
          return f.f0;
        } else if constexpr (std::is_same_v<T, SinusoidalForce>) {
          return f.amplitude * std::sin(f.frequency * t + f.phase);
        } else {
          if (t < f.times.front() || t > f.times.back())
            throw ValidationError("tabulated force: sampled at t=" + fmt(t) +
                                  " outside covered range [" + fmt(f.times.front()) + ", " +
                                  fmt(f.times.back()) + "]");
          auto it = std::upper_bound(f.times.begin(), f.times.end(), t);
          size_t hi = std::min<size_t>(f.times.size() - 1,
                                       static_cast<size_t>(it - f.times.begin()));
          if (hi == 0) hi = 1;
          const size_t lo = hi - 1;
          const double u = (t - f.times[lo]) / (f.times[hi] - f.times[lo]);
          return f.values[lo] + u * (f.values[hi] - f.values[lo]);
        }
      },
      v_);
}

ForceModel ForceModel::shifted(double dt) const {
  return std::visit(
      [dt](const auto& f) -> ForceModel {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroForce>) {
          return ForceModel(ZeroForce{});
        } else if constexpr (std::is_same_v<T, ConstantForce>) {
          return ForceModel(ConstantForce{f.f0});
        } else if constexpr (std::is_same_v<T, SinusoidalForce>) {
          return ForceModel(SinusoidalForce{f.amplitude, f.frequency,
                                            f.phase + f.frequency * dt});
        } else {
          TabulatedForce g = f;
          for (double& tv : g.times) tv -= dt;
          return ForceModel(std::move(g));
        }
      },
      v_);
}

bool ForceModel::closed_form() const { return !std::holds_alternative<TabulatedForce>(v_); }

std::string ForceModel::describe() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroForce>) {
          return "zero";
        } else if constexpr (std::is_same_v<T, ConstantForce>) {
          return "constant(f0=" + fmt(f.f0) + ")";
        } else if constexpr (std::is_same_v<T, SinusoidalForce>) {
          return "sinusoidal(amplitude=" + fmt(f.amplitude) + ",frequency=" + fmt(f.frequency) +
                 ",phase=" + fmt(f.phase) + ")";
        } else {
          return "tabulated(n=" + std::to_string(f.times.size()) + ")";
        }
      },
      v_);
}

}  // namespace tomosc::dynamics
