#include "qaept/lsode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qaept {

namespace {

constexpr double kUnbounded = 1e18;

std::vector<double> default_grid(double t_max = 10.0, int n = 101) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = t_max * i / (n - 1);
  return g;
}

std::function<double(double)> constant(double v) {
  return [v](double) { return v; };
}

}  // namespace

double LsodeSystem::wronskian_of(double t) const { return std::exp(-f(t)); }

double LsodeSystem::fddot(double t) const {
  if (fddot_fn) return fddot_fn(t);
  const double h = 1e-4;
  return (fdot(t - 2 * h) - 8 * fdot(t - h) + 8 * fdot(t + h) - fdot(t + 2 * h)) /
         (12 * h);
}

LsodeSystem LsodeSystem::free_particle(double mass) {
  LsodeSystem s;
  s.fdot = constant(0.0);
  s.omega_sq = constant(0.0);
  s.lambda = constant(0.0);
  s.f = constant(0.0);
  s.fddot_fn = constant(0.0);
  s.mass = mass;
  s.kind = SystemKind::free_particle;
  s.const_omega = 0.0;
  return s;
}

LsodeSystem LsodeSystem::harmonic(double omega0, double mass) {
  LsodeSystem s;
  s.fdot = constant(0.0);
  s.omega_sq = constant(omega0 * omega0);
  s.lambda = constant(0.0);
  s.f = constant(0.0);
  s.fddot_fn = constant(0.0);
  s.mass = mass;
  s.kind = SystemKind::harmonic;
  s.const_omega = omega0;
  return s;
}

LsodeSystem LsodeSystem::caldirola_kanai(double gamma, double omega, double mass) {
  LsodeSystem s;
  s.fdot = constant(gamma);
  s.omega_sq = constant(omega * omega);
  s.lambda = constant(0.0);
  s.f = [gamma](double t) { return gamma * t; };
  s.fddot_fn = constant(0.0);
  s.mass = mass;
  s.kind = SystemKind::caldirola_kanai;
  if (gamma == 0.0) s.const_omega = omega;
  return s;
}

LsodeSystem LsodeSystem::hermite(double alpha, double omega, double mass) {
  LsodeSystem s;
  s.fdot = [alpha](double t) { return alpha * t; };
  s.omega_sq = constant(omega * omega);
  s.lambda = constant(0.0);
  s.f = [alpha](double t) { return 0.5 * alpha * t * t; };
  s.fddot_fn = constant(alpha);
  s.mass = mass;
  s.kind = SystemKind::hermite;
  if (alpha == 0.0) s.const_omega = omega;
  return s;
}

LsodeSystem lane_emden_system(double mu, double nu, double omega0, double mass) {
  if (nu <= 0.0) throw ValidationError("lane_emden_system: nu must be positive");
  auto guard = [nu](double t) {
    if (1.0 + nu * t <= 0.0)
      throw DomainViolation("lane_emden_system: t <= -1/nu");
  };
  LsodeSystem s;
  s.fdot = [mu, nu, guard](double t) {
    guard(t);
    return mu / (1.0 + nu * t);
  };
  s.omega_sq = constant(omega0 * omega0);
  s.lambda = constant(0.0);
  s.f = [mu, nu, guard](double t) {
    guard(t);
    return mu / nu * std::log(1.0 + nu * t);
  };
  s.fddot_fn = [mu, nu, guard](double t) {
    guard(t);
    const double q = 1.0 + nu * t;
    return -mu * nu / (q * q);
  };
  s.mass = mass;
  s.kind = SystemKind::lane_emden;
  if (mu == 0.0) s.const_omega = omega0;
  return s;
}

ClassicalBasis::ClassicalBasis(LsodeSystem sys, BasisSource source,
                               std::vector<double> t_grid,
                               std::pair<double, double> span,
                               std::function<double(double)> u1,
                               std::function<double(double)> du1,
                               std::function<double(double)> u2,
                               std::function<double(double)> du2,
                               std::function<double(double)> up,
                               std::function<double(double)> dup)
    : sys_(std::move(sys)),
      source_(source),
      t_grid_(std::move(t_grid)),
      span_(span),
      u1_(std::move(u1)),
      du1_(std::move(du1)),
      u2_(std::move(u2)),
      du2_(std::move(du2)),
      up_(std::move(up)),
      dup_(std::move(dup)) {}

double ClassicalBasis::wronskian(double t) const {
  return du1_(t) * u2_(t) - u1_(t) * du2_(t);
}

bool ClassicalBasis::contains(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(span_.second - span_.first));
  return t >= span_.first - slack && t <= span_.second + slack;
}

double ClassicalBasis::ddu1(double t) const {
  return -sys_.fdot(t) * du1_(t) - sys_.omega_sq(t) * u1_(t);
}

double ClassicalBasis::ddu2(double t) const {
  return -sys_.fdot(t) * du2_(t) - sys_.omega_sq(t) * u2_(t);
}

ClassicalBasis integrate_classical(const LsodeSystem& sys,
                                   const std::vector<double>& t_grid,
                                   const OdeTolerances& tol,
                                   double wronskian_tol) {
  if (t_grid.size() < 2) throw ValidationError("integrate_classical: need >= 2 sample times");
  if (t_grid.front() != 0.0)
    throw ValidationError("integrate_classical: t_grid must start at 0");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw ValidationError("integrate_classical: t_grid must be strictly increasing");

  // State: (u1, u1', u2, u2', up, up').
  OdeRhs rhs = [&sys](double t, std::span<const double> y, std::span<double> d) {
    const double fd = sys.fdot(t);
    const double w2 = sys.omega_sq(t);
    d[0] = y[1];
    d[1] = -fd * y[1] - w2 * y[0];
    d[2] = y[3];
    d[3] = -fd * y[3] - w2 * y[2];
    d[4] = y[5];
    d[5] = sys.lambda(t) - fd * y[5] - w2 * y[4];
  };
  const double y0[6] = {0.0, 1.0, 1.0, 0.0, 0.0, 0.0};

  auto traj = std::make_shared<DenseTrajectory>(
      integrate_dopri5(rhs, y0, 0.0, t_grid.back(), tol));

  auto comp = [traj](int c) {
    return [traj, c](double t) { return traj->eval(t, c); };
  };
  ClassicalBasis basis(sys, BasisSource::numeric, t_grid,
                       {0.0, t_grid.back()}, comp(0), comp(1), comp(2), comp(3),
                       comp(4), comp(5));

  for (double t : t_grid) {
    const double defect = std::abs(basis.wronskian(t) - sys.wronskian_of(t));
    if (defect > wronskian_tol)
      throw WronskianViolation("integrate_classical: |W - e^{-f}| = " +
                               std::to_string(defect) + " at t = " +
                               std::to_string(t));
  }
  return basis;
}

double wronskian(const ClassicalBasis& basis, double t) {
  if (!basis.contains(t)) throw OutOfSpan("wronskian: t outside basis span");
  return basis.wronskian(t);
}

ClassicalBasis closed_form_ck(double gamma, double omega, double mass) {
  if (gamma < 0.0) throw ValidationError("closed_form_ck: gamma must be >= 0");
  if (omega <= 0.0) throw ValidationError("closed_form_ck: omega must be > 0");
  auto sys = LsodeSystem::caldirola_kanai(gamma, omega, mass);
  const double g = gamma;
  const double disc = omega * omega - 0.25 * gamma * gamma;

  std::function<double(double)> u1, du1, u2, du2;
  if (disc > 0.0) {  // underdamped
    const double om = std::sqrt(disc);
    u1 = [g, om](double t) { return std::exp(-0.5 * g * t) * std::sin(om * t) / om; };
    du1 = [g, om](double t) {
      return std::exp(-0.5 * g * t) *
             (std::cos(om * t) - 0.5 * g / om * std::sin(om * t));
    };
    u2 = [g, om](double t) {
      return std::exp(-0.5 * g * t) *
             (std::cos(om * t) + 0.5 * g / om * std::sin(om * t));
    };
    const double w2 = omega * omega;
    du2 = [g, om, w2](double t) {
      return -std::exp(-0.5 * g * t) * w2 / om * std::sin(om * t);
    };
  } else if (disc == 0.0) {  // critical damping
    u1 = [g](double t) { return t * std::exp(-0.5 * g * t); };
    du1 = [g](double t) { return std::exp(-0.5 * g * t) * (1.0 - 0.5 * g * t); };
    u2 = [g](double t) { return std::exp(-0.5 * g * t) * (1.0 + 0.5 * g * t); };
    du2 = [g](double t) { return -std::exp(-0.5 * g * t) * 0.25 * g * g * t; };
  } else {  // overdamped: hyperbolic branch
    const double om = std::sqrt(-disc);
    u1 = [g, om](double t) { return std::exp(-0.5 * g * t) * std::sinh(om * t) / om; };
    du1 = [g, om](double t) {
      return std::exp(-0.5 * g * t) *
             (std::cosh(om * t) - 0.5 * g / om * std::sinh(om * t));
    };
    u2 = [g, om](double t) {
      return std::exp(-0.5 * g * t) *
             (std::cosh(om * t) + 0.5 * g / om * std::sinh(om * t));
    };
    const double w2 = omega * omega;
    du2 = [g, om, w2](double t) {
      return -std::exp(-0.5 * g * t) * w2 / om * std::sinh(om * t);
    };
  }

  return ClassicalBasis(std::move(sys), BasisSource::closed_form, default_grid(),
                        {-kUnbounded, kUnbounded}, u1, du1, u2, du2,
                        constant(0.0), constant(0.0));
}

ClassicalBasis closed_form_hermite(double alpha, double omega, double mass,
                                   const specfun::SeriesControl& ctl) {
  if (alpha <= 0.0) throw ValidationError("closed_form_hermite: alpha must be > 0");
  auto sys = LsodeSystem::hermite(alpha, omega, mass);
  const double a1 = 0.5 + omega * omega / (2.0 * alpha);
  const double a2 = omega * omega / (2.0 * alpha);

  auto u1 = [alpha, a1, ctl](double t) {
    return t * specfun::kummer_1f1(a1, 1.5, -0.5 * alpha * t * t, ctl);
  };
  auto du1 = [alpha, a1, ctl](double t) {
    const double z = -0.5 * alpha * t * t;
    return specfun::kummer_1f1(a1, 1.5, z, ctl) -
           2.0 * a1 / 3.0 * alpha * t * t *
               specfun::kummer_1f1(a1 + 1.0, 2.5, z, ctl);
  };
  auto u2 = [alpha, a2, ctl](double t) {
    return specfun::kummer_1f1(a2, 0.5, -0.5 * alpha * t * t, ctl);
  };
  auto du2 = [alpha, a2, ctl](double t) {
    const double z = -0.5 * alpha * t * t;
    return -2.0 * a2 * alpha * t * specfun::kummer_1f1(a2 + 1.0, 1.5, z, ctl);
  };

  return ClassicalBasis(std::move(sys), BasisSource::closed_form, default_grid(),
                        {-kUnbounded, kUnbounded}, u1, du1, u2, du2,
                        constant(0.0), constant(0.0));
}

ClassicalBasis closed_form_free(double mass) {
  return ClassicalBasis(LsodeSystem::free_particle(mass), BasisSource::closed_form,
                        default_grid(), {-kUnbounded, kUnbounded},
                        [](double t) { return t; }, constant(1.0), constant(1.0),
                        constant(0.0), constant(0.0), constant(0.0));
}

ClassicalBasis closed_form_harmonic(double omega0, double mass) {
  if (omega0 <= 0.0)
    throw ValidationError("closed_form_harmonic: omega0 must be > 0");
  auto u1 = [omega0](double t) { return std::sin(omega0 * t) / omega0; };
  auto du1 = [omega0](double t) { return std::cos(omega0 * t); };
  auto u2 = [omega0](double t) { return std::cos(omega0 * t); };
  auto du2 = [omega0](double t) { return -omega0 * std::sin(omega0 * t); };
  return ClassicalBasis(LsodeSystem::harmonic(omega0, mass),
                        BasisSource::closed_form, default_grid(),
                        {-kUnbounded, kUnbounded}, u1, du1, u2, du2,
                        constant(0.0), constant(0.0));
}

namespace {

double bisect_zero(const std::function<double(double)>& u, double a, double b) {
  double fa = u(a);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b));
       ++it) {
    const double m = 0.5 * (a + b);
    const double fm = u(m);
    if (fm == 0.0) return m;
    if ((fa < 0) != (fm < 0)) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> find_zeros(const std::function<double(double)>& u, double t_a,
                               double t_b, int samples) {
  if (!(t_b > t_a)) throw ValidationError("find_zeros: need t_b > t_a");
  if (samples < 3) throw ValidationError("find_zeros: need >= 3 samples");
  std::vector<double> zeros;
  double tp = t_a, fp = u(t_a);
  for (int i = 1; i < samples; ++i) {
    const double t = t_a + (t_b - t_a) * i / (samples - 1);
    const double ft = u(t);
    if (fp == 0.0) {
      if (zeros.empty() || std::abs(zeros.back() - tp) > 1e-10) zeros.push_back(tp);
    } else if ((fp < 0) != (ft < 0) && ft != 0.0) {
      zeros.push_back(bisect_zero(u, tp, t));
    }
    tp = t;
    fp = ft;
  }
  if (fp == 0.0) zeros.push_back(tp);
  return zeros;
}

int count_zeros(const std::function<double(double)>& u, double t_a, double t_b,
                int samples, int* grazing,
                const std::function<double(double)>& du) {
  auto zeros = find_zeros(u, t_a, t_b, samples);
  if (grazing) {
    *grazing = 0;
    // A local extremum grazing the axis may hide a zero pair between samples:
    // flag samples where the derivative changes sign while |u| is small.
    double scale = 0.0;
    std::vector<double> us(samples);
    for (int i = 0; i < samples; ++i) {
      const double t = t_a + (t_b - t_a) * i / (samples - 1);
      us[i] = u(t);
      scale = std::max(scale, std::abs(us[i]));
    }
    for (int i = 1; i + 1 < samples; ++i) {
      const bool extremum =
          (us[i] - us[i - 1]) * (us[i + 1] - us[i]) < 0.0 ||
          (du && du(t_a + (t_b - t_a) * (i - 1) / (samples - 1)) *
                         du(t_a + (t_b - t_a) * (i + 1) / (samples - 1)) <
                     0.0);
      const bool same_sign = (us[i - 1] > 0) == (us[i + 1] > 0);
      if (extremum && same_sign && std::abs(us[i]) < 1e-6 * scale) ++(*grazing);
    }
  }
  return static_cast<int>(zeros.size());
}

Curve tilde_u2(const ClassicalBasis& basis, double gamma_tilde) {
  const double g = gamma_tilde;
  auto b = std::make_shared<ClassicalBasis>(basis);
  Curve c;
  c.value = [b, g](double t) { return b->u2(t) - 0.5 * g * b->u1(t); };
  c.deriv = [b, g](double t) { return b->du2(t) - 0.5 * g * b->du1(t); };
  // Still a homogeneous solution, so the second derivative follows from the ODE.
  c.second = [b, g](double t) { return b->ddu2(t) - 0.5 * g * b->ddu1(t); };
  return c;
}

}  // namespace qaept
