#include "qaept/ode45.hpp"

#include <algorithm>
#include <cmath>

namespace qaept {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;

// Embedded 4th-order error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Dense-output weights (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace

const DenseTrajectory::Segment& DenseTrajectory::segment_for(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t_end_ - t_begin_));
  if (t < t_begin_ - slack || t > t_end_ + slack)
    throw OutOfSpan("DenseTrajectory: time outside integration span");
  // Binary search for the segment whose interval contains t.
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), t,
      [](double tt, const Segment& s) { return tt < s.t0; });
  if (it != segments_.begin()) --it;
  return *it;
}

double DenseTrajectory::eval(double t, int c) const {
  const Segment& s = segment_for(t);
  const double th = std::clamp((t - s.t0) / s.h, 0.0, 1.0);
  const double th1 = 1.0 - th;
  const double* r = s.rcont.data() + 5 * c;
  return r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
}

std::vector<double> DenseTrajectory::eval(double t) const {
  std::vector<double> out(dim_);
  const Segment& s = segment_for(t);
  const double th = std::clamp((t - s.t0) / s.h, 0.0, 1.0);
  const double th1 = 1.0 - th;
  for (int c = 0; c < dim_; ++c) {
    const double* r = s.rcont.data() + 5 * c;
    out[c] = r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
  }
  return out;
}

DenseTrajectory integrate_dopri5(const OdeRhs& rhs, std::span<const double> y0,
                                 double t0, double t1,
                                 const OdeTolerances& tol) {
  if (!(t1 > t0)) throw ValidationError("integrate_dopri5: need t1 > t0");
  const int n = static_cast<int>(y0.size());

  DenseTrajectory traj;
  traj.t_begin_ = t0;
  traj.t_end_ = t1;
  traj.dim_ = n;

  std::vector<double> y(y0.begin(), y0.end()), ynew(n), ytmp(n);
  std::vector<std::vector<double>> k(7, std::vector<double>(n));

  double t = t0;
  rhs(t, y, k[0]);  // FSAL seed

  double h = std::min((t1 - t0) / 100.0, 0.1);
  const double hmin = 1e-14 * std::max(1.0, std::abs(t1 - t0));
  long rejected_in_a_row = 0;

  while (t < t1) {
    h = std::min(h, t1 - t);

    auto stage = [&](double ct, std::initializer_list<double> as, int ki) {
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        int j = 0;
        for (double a : as) acc += a * k[j++][i];
        ytmp[i] = y[i] + h * acc;
      }
      rhs(t + ct * h, ytmp, k[ki]);
    };

    stage(c2, {a21}, 1);
    stage(c3, {a31, a32}, 2);
    stage(c4, {a41, a42, a43}, 3);
    stage(c5, {a51, a52, a53, a54}, 4);
    stage(1.0, {a61, a62, a63, a64, a65}, 5);
    for (int i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] +
                            a75 * k[4][i] + a76 * k[5][i]);
    rhs(t + h, ynew, k[6]);  // also the FSAL stage of the next step

    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ei = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] +
                             e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
      const double sc = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / n);
    if (!std::isfinite(err)) err = 1e10;  // singular rhs: force a rejection

    if (err <= 1.0) {
      DenseTrajectory::Segment seg;
      seg.t0 = t;
      seg.h = h;
      seg.rcont.resize(5 * n);
      for (int i = 0; i < n; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = h * k[0][i] - dy;
        double* r = seg.rcont.data() + 5 * i;
        r[0] = y[i];
        r[1] = dy;
        r[2] = bspl;
        r[3] = dy - h * k[6][i] - bspl;
        r[4] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                    d6 * k[5][i] + d7 * k[6][i]);
      }
      traj.segments_.push_back(std::move(seg));

      t += h;
      y.swap(ynew);
      k[0].swap(k[6]);
      rejected_in_a_row = 0;
    } else if (++rejected_in_a_row > 50) {
      throw StepFailure("integrate_dopri5: repeated step rejections");
    }

    const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < hmin) throw StepFailure("integrate_dopri5: step size underflow");
  }

  return traj;
}

}  // namespace qaept
