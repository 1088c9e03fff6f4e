#pragma once

#include "qaept/errors.hpp"

namespace qaept::specfun {

/// Convergence budget for series evaluations.
struct SeriesControl {
  int max_terms = 500;
  double rel_tol = 1e-12;
};

/// Physicists' Hermite polynomial H_n(x) via the three-term recurrence
/// H_{n+1} = 2x H_n - 2n H_{n-1}.
double hermite_poly(int n, double x);

/// Confluent hypergeometric function 1F1(a;b;z) by power series.
/// For z < 0 the Kummer transformation 1F1(a;b;z) = e^z 1F1(b-a;b;-z)
/// is applied so that the summed series has no catastrophic cancellation.
/// Throws PoleParameter if b is a nonpositive integer, NonConvergence if
/// the term budget is exhausted.
double kummer_1f1(double a, double b, double z, const SeriesControl& ctl = {});

/// Imaginary error function erfi(x) = -i erf(ix), real power series.
/// Throws Overflow once e^{x^2} is no longer representable.
double erfi(double x, const SeriesControl& ctl = {});

/// Parabolic cylinder function of integer order,
/// D_n(z) = 2^{-n/2} e^{-z^2/4} H_n(z/sqrt(2)).
double parabolic_cylinder_int(int n, double z);

}  // namespace qaept::specfun
