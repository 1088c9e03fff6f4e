#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qaept/errors.hpp"

namespace qaept {

/// Right-hand side of y' = f(t, y); writes into dydt.
using OdeRhs = std::function<void(double t, std::span<const double> y,
                                  std::span<double> dydt)>;

struct OdeTolerances {
  double rel = 1e-10;
  double abs = 1e-10;
};

/// Piecewise polynomial interpolant produced by the Dormand-Prince 5(4)
/// integrator (4th-order continuous extension). Evaluation anywhere inside
/// the integration span, in any order.
class DenseTrajectory {
 public:
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  int dimension() const { return dim_; }

  /// Value of component `c` at time t. Throws OutOfSpan outside the span.
  double eval(double t, int c) const;

  /// All components at time t.
  std::vector<double> eval(double t) const;

 private:
  friend DenseTrajectory integrate_dopri5(const OdeRhs&, std::span<const double>,
                                          double, double, const OdeTolerances&);

  struct Segment {
    double t0, h;
    std::vector<double> rcont;  // 5 * dim interpolation coefficients
  };

  const Segment& segment_for(double t) const;

  double t_begin_ = 0, t_end_ = 0;
  int dim_ = 0;
  std::vector<Segment> segments_;
};

/// Integrates y' = f(t,y) from t0 to t1 (t1 > t0) with adaptive step control
/// and stores the dense-output coefficients of every accepted step.
/// Throws StepFailure if the controller cannot reach the tolerance.
DenseTrajectory integrate_dopri5(const OdeRhs& rhs, std::span<const double> y0,
                                 double t0, double t1,
                                 const OdeTolerances& tol = {});

}  // namespace qaept
