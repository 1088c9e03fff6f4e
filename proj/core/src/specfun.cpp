#include "qaept/specfun.hpp"

#include <cmath>
#include <cstdlib>

namespace qaept::specfun {

double hermite_poly(int n, double x) {
  if (n < 0) throw ValidationError("hermite_poly: order must be nonnegative");
  if (n == 0) return 1.0;
  double hm = 1.0;       // H_{k-1}
  double h = 2.0 * x;    // H_k
  for (int k = 1; k < n; ++k) {
    const double hp = 2.0 * x * h - 2.0 * k * hm;
    hm = h;
    h = hp;
  }
  return h;
}

namespace {

bool is_nonpositive_integer(double b) {
  return b <= 0.0 && b == std::floor(b);
}

// Plain power series; caller guarantees z >= 0 so all-late terms share a sign
// and the stopping test on |term|/|sum| is reliable.
double kummer_series(double a, double b, double z, const SeriesControl& ctl) {
  double term = 1.0;
  double sum = 1.0;
  int quiet = 0;  // consecutive terms below tolerance
  for (int k = 0; k < ctl.max_terms; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1);
    sum += term;
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (++quiet >= 2) return sum;
    } else {
      quiet = 0;
    }
  }
  throw NonConvergence("kummer_1f1: series did not converge within max_terms");
}

}  // namespace

double kummer_1f1(double a, double b, double z, const SeriesControl& ctl) {
  if (is_nonpositive_integer(b))
    throw PoleParameter("kummer_1f1: b is a nonpositive integer");
  if (ctl.max_terms < 1 || ctl.rel_tol <= 0.0 || ctl.rel_tol >= 1.0)
    throw ValidationError("kummer_1f1: invalid SeriesControl");
  if (z == 0.0) return 1.0;
  if (z < 0.0) return std::exp(z) * kummer_series(b - a, b, -z, ctl);
  return kummer_series(a, b, z, ctl);
}

double erfi(double x, const SeriesControl& ctl) {
  // erfi(x) = (2/sqrt(pi)) sum_k x^{2k+1} / (k! (2k+1)), odd in x.
  if (x * x > 700.0)
    throw Overflow("erfi: argument too large, e^{x^2} not representable");
  if (x == 0.0) return 0.0;
  const double x2 = x * x;
  double term = x;  // k = 0 contribution before the 1/(2k+1) weight
  double sum = x;
  int quiet = 0;
  for (int k = 1; k < ctl.max_terms; ++k) {
    term *= x2 / k;
    const double contrib = term / (2 * k + 1);
    sum += contrib;
    if (std::abs(contrib) <= ctl.rel_tol * std::abs(sum)) {
      if (++quiet >= 2) return 2.0 / std::sqrt(M_PI) * sum;
    } else {
      quiet = 0;
    }
  }
  throw NonConvergence("erfi: series did not converge within max_terms");
}

double parabolic_cylinder_int(int n, double z) {
  if (n < 0) throw ValidationError("parabolic_cylinder_int: order must be nonnegative");
  return std::pow(2.0, -0.5 * n) * std::exp(-0.25 * z * z) *
         hermite_poly(n, z / std::sqrt(2.0));
}

}  // namespace qaept::specfun
