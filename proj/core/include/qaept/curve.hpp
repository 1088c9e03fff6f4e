#pragma once

#include <functional>

namespace qaept {

/// A scalar function of time with its first two derivatives. Closed-form
/// constructions fill all three members analytically; `from_value` builds
/// the derivatives by 5-point central differences when only the value is
/// available.
struct Curve {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> second;

  double operator()(double t) const { return value(t); }

  static Curve from_value(std::function<double(double)> f, double h = 1e-4);
};

inline Curve Curve::from_value(std::function<double(double)> f, double h) {
  Curve c;
  c.value = f;
  c.deriv = [f, h](double t) {
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
  };
  c.second = [f, h](double t) {
    return (-f(t - 2 * h) + 16 * f(t - h) - 30 * f(t) + 16 * f(t + h) -
            f(t + 2 * h)) /
           (12 * h * h);
  };
  return c;
}

}  // namespace qaept
