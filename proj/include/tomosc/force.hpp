#pragma once

#include <string>
#include <variant>
#include <vector>

namespace tomosc::dynamics {

struct ZeroForce {};

struct ConstantForce {
  double f0 = 0.0;
};

/// f(t) = amplitude * sin(frequency * t + phase)
struct SinusoidalForce {
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
};

/// Piecewise-linear samples (times strictly increasing, first sample at t <= 0).
struct TabulatedForce {
  std::vector<double> times;
  std::vector<double> values;
};

/// External drive f(t) acting on the oscillator. The closed-form kinds carry
/// exact drive integrals; the tabulated kind is integrated adaptively.
class ForceModel {
 public:
  using Variant = std::variant<ZeroForce, ConstantForce, SinusoidalForce, TabulatedForce>;

  static ForceModel zero();
  static ForceModel constant(double f0);
  static ForceModel sinusoidal(double amplitude, double frequency, double phase = 0.0);
  static ForceModel tabulated(std::vector<double> times, std::vector<double> values);

  /// f(t); tabulated forces must be sampled inside their time range.
  double value(double t) const;

  /// The force as seen from a later origin: result(tau) = f(tau + dt).
  ForceModel shifted(double dt) const;

  /// True for kinds whose drive integrals have closed forms.
  bool closed_form() const;

  std::string describe() const;
  const Variant& raw() const { return v_; }

 private:
  explicit ForceModel(Variant v);
  Variant v_;
};

}  // namespace tomosc::dynamics
