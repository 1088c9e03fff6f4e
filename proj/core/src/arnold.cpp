#include "qaept/arnold.hpp"

#include <algorithm>
#include <cmath>

namespace qaept {

namespace {

constexpr double kDefaultScanHalfWidth = 40.0;
constexpr int kScanSamplesPerUnit = 400;

std::pair<double, double> clip_window(const ClassicalBasis& basis,
                                      double half_width) {
  auto [lo, hi] = basis.span();
  return {std::max(lo, -half_width), std::min(hi, half_width)};
}

int scan_samples(double lo, double hi) {
  return std::max(1001, static_cast<int>((hi - lo) * kScanSamplesPerUnit) + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// ArnoldMap
// ---------------------------------------------------------------------------

ArnoldMap::ArnoldMap(const ClassicalBasis& basis,
                     std::optional<std::pair<double, double>> scan_window)
    : basis_(std::make_shared<ClassicalBasis>(basis)) {
  auto window = scan_window ? *scan_window
                            : clip_window(basis, kDefaultScanHalfWidth);
  if (!(window.first <= 0.0 && window.second >= 0.0))
    throw ValidationError("ArnoldMap: scan window must contain t = 0");

  auto u2 = [this](double t) { return basis_->u2(t); };

  patch_hi_ = window.second;
  hi_is_focal_ = false;
  if (window.second > 0.0) {
    auto zeros = find_zeros(u2, 0.0, window.second,
                            scan_samples(0.0, window.second));
    if (!zeros.empty()) {
      patch_hi_ = zeros.front();
      hi_is_focal_ = true;
    }
  }
  patch_lo_ = window.first;
  lo_is_focal_ = false;
  if (window.first < 0.0) {
    auto zeros = find_zeros(u2, window.first, 0.0,
                            scan_samples(window.first, 0.0));
    if (!zeros.empty()) {
      patch_lo_ = zeros.back();
      lo_is_focal_ = true;
    }
  }
}

bool ArnoldMap::in_patch(double t) const {
  const double guard = 1e-12 * std::max(1.0, std::abs(t));
  return t > patch_lo_ + (lo_is_focal_ ? guard : -guard) &&
         t < patch_hi_ - (hi_is_focal_ ? guard : -guard);
}

double ArnoldMap::tau(double t) const {
  if (!in_patch(t)) throw FocalPoint("ArnoldMap: t outside the patch");
  return basis_->u1(t) / basis_->u2(t);
}

double ArnoldMap::t_of_tau(double tau_target) const {
  // Bracket inside the open patch; tau is strictly increasing there.
  double lo = patch_lo_, hi = patch_hi_;
  const double width = hi - lo;
  double shrink = lo_is_focal_ || hi_is_focal_ ? 1e-3 * width : 0.0;
  auto tau_at = [this](double t) { return basis_->u1(t) / basis_->u2(t); };

  double a = lo_is_focal_ ? lo + shrink : lo;
  double b = hi_is_focal_ ? hi - shrink : hi;
  // Push the bracket toward focal ends until the target is enclosed.
  for (int i = 0; i < 60 && tau_at(a) > tau_target && lo_is_focal_; ++i)
    a = lo + (a - lo) * 0.25;
  for (int i = 0; i < 60 && tau_at(b) < tau_target && hi_is_focal_; ++i)
    b = hi - (hi - b) * 0.25;
  if (tau_at(a) > tau_target || tau_at(b) < tau_target)
    throw OutOfImage("arnold_inverse: tau outside the patch image");

  // Bisection on u1 - tau u2 (same sign as tau(t) - tau on the patch).
  auto g = [this, tau_target](double t) {
    return basis_->u1(t) - tau_target * basis_->u2(t);
  };
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b));
       ++i) {
    const double m = 0.5 * (a + b);
    if (g(m) < 0.0)
      a = m;
    else
      b = m;
  }
  double t = 0.5 * (a + b);
  // Newton polish.
  for (int i = 0; i < 4; ++i) {
    const double dg = basis_->du1(t) - tau_target * basis_->du2(t);
    if (dg == 0.0) break;
    const double step = g(t) / dg;
    const double tn = t - step;
    if (tn <= a || tn >= b) break;
    t = tn;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

std::pair<double, double> arnold_forward(const ArnoldMap& map, double x, double t) {
  const double tau = map.tau(t);  // throws FocalPoint when outside
  const double u2 = map.basis().u2(t);
  return {(x - map.basis().up(t)) / u2, tau};
}

std::pair<double, double> arnold_inverse(const ArnoldMap& map, double kappa,
                                         double tau) {
  const double t = map.t_of_tau(tau);
  return {map.basis().u2(t) * kappa + map.basis().up(t), t};
}

// ---------------------------------------------------------------------------
// AeptMap
// ---------------------------------------------------------------------------

namespace {

// b~ = sqrt((u2 - g u1/2)^2 + W^2 u1^2) with analytic derivatives; W here is
// the target frequency Omega~, not a Wronskian.
Curve tilde_b_curve(std::shared_ptr<const ClassicalBasis> basis, double omega_cap,
                    double gamma_tilde) {
  const double g = gamma_tilde, oc2 = omega_cap * omega_cap;
  auto val = [basis, g, oc2](double t) {
    const double tu2 = basis->u2(t) - 0.5 * g * basis->u1(t);
    const double u1 = basis->u1(t);
    return std::sqrt(tu2 * tu2 + oc2 * u1 * u1);
  };
  auto der = [basis, g, oc2, val](double t) {
    const double tu2 = basis->u2(t) - 0.5 * g * basis->u1(t);
    const double dtu2 = basis->du2(t) - 0.5 * g * basis->du1(t);
    return (tu2 * dtu2 + oc2 * basis->u1(t) * basis->du1(t)) / val(t);
  };
  Curve c;
  c.value = val;
  c.deriv = der;
  c.second = [basis, g, oc2, val, der](double t) {
    const double tu2 = basis->u2(t) - 0.5 * g * basis->u1(t);
    const double dtu2 = basis->du2(t) - 0.5 * g * basis->du1(t);
    const double ddtu2 = basis->ddu2(t) - 0.5 * g * basis->ddu1(t);
    const double b = val(t), db = der(t);
    return (dtu2 * dtu2 + tu2 * ddtu2 +
            oc2 * (basis->du1(t) * basis->du1(t) + basis->u1(t) * basis->ddu1(t)) -
            db * db) /
           b;
  };
  return c;
}

// Continuous angle theta(t) with tan(theta) = omega_cap u1 / u2~, theta(0)=0;
// each zero of u2~ crossed adds (subtracts, for t < 0) pi.
class UnwrappedAngle {
 public:
  UnwrappedAngle(std::shared_ptr<const ClassicalBasis> basis, double omega_cap,
                 double gamma_tilde, std::pair<double, double> window)
      : basis_(std::move(basis)), omega_cap_(omega_cap), gamma_(gamma_tilde) {
    auto tu2 = [this](double t) {
      return basis_->u2(t) - 0.5 * gamma_ * basis_->u1(t);
    };
    if (window.second > 0.0)
      pos_zeros_ = find_zeros(tu2, 0.0, window.second,
                              scan_samples(0.0, window.second));
    if (window.first < 0.0)
      neg_zeros_ = find_zeros(tu2, window.first, 0.0,
                              scan_samples(window.first, 0.0));
  }

  double operator()(double t) const {
    const double tu2 = basis_->u2(t) - 0.5 * gamma_ * basis_->u1(t);
    const double ratio = omega_cap_ * basis_->u1(t) / tu2;
    long k = 0;
    if (t > 0.0)
      k = std::upper_bound(pos_zeros_.begin(), pos_zeros_.end(), t) -
          pos_zeros_.begin();
    else if (t < 0.0)
      k = -(neg_zeros_.end() -
            std::lower_bound(neg_zeros_.begin(), neg_zeros_.end(), t));
    return std::atan(ratio) + M_PI * k;
  }

 private:
  std::shared_ptr<const ClassicalBasis> basis_;
  double omega_cap_, gamma_;
  std::vector<double> pos_zeros_, neg_zeros_;
};

}  // namespace

bool AeptMap::contains(double t2) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t2));
  return t2 >= span_.first - slack && t2 <= span_.second + slack;
}

double AeptMap::time_map_inverse(double t1) const {
  double a = span_.first, b = span_.second;
  const double ta = tmap_(a), tb = tmap_(b);
  if (t1 < ta - 1e-12 || t1 > tb + 1e-12)
    throw OutOfImage("AeptMap: t1 outside the image of the time map");
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b));
       ++i) {
    const double m = 0.5 * (a + b);
    if (tmap_(m) < t1)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

AeptMap AeptMap::to_harmonic(const ClassicalBasis& source, double omega_tilde,
                             double gamma_tilde) {
  auto basis = std::make_shared<const ClassicalBasis>(source);
  const double oc2 = omega_tilde * omega_tilde - 0.25 * gamma_tilde * gamma_tilde;

  AeptMap m;
  m.sys2_ = source.system();

  if (omega_tilde == 0.0 && gamma_tilde == 0.0) {
    // Free-particle target: the transformation degenerates to the Arnold map.
    ArnoldMap arnold(source);
    m.sys1_ = LsodeSystem::free_particle(source.system().mass);
    m.omega0_ = 0.0;
    m.span_ = arnold.patch();
    Curve b;
    b.value = [basis](double t) { return basis->u2(t); };
    b.deriv = [basis](double t) { return basis->du2(t); };
    b.second = [basis](double t) { return basis->ddu2(t); };
    m.b_ = b;
    m.tmap_ = [basis](double t) { return basis->u1(t) / basis->u2(t); };
    return m;
  }

  if (oc2 <= 0.0)
    throw ContinuousSpectrum(
        "AeptMap::to_harmonic: omega_tilde^2 - gamma_tilde^2/4 must be positive");
  const double oc = std::sqrt(oc2);

  m.sys1_ = LsodeSystem::harmonic(oc, source.system().mass);
  m.omega0_ = oc;
  m.span_ = clip_window(source, kDefaultScanHalfWidth);
  m.b_ = tilde_b_curve(basis, oc, gamma_tilde);
  UnwrappedAngle theta(basis, oc, gamma_tilde, m.span_);
  m.tmap_ = [theta, oc](double t) { return theta(t) / oc; };
  return m;
}

AeptMap AeptMap::engineered(const LsodeSystem& source) {
  auto eng = engineer_b_from_wronskian(source);
  AeptMap m;
  m.sys2_ = source;
  m.sys1_ = eng.auxiliary;
  m.omega0_ = eng.auxiliary.const_omega;
  m.span_ = {-kDefaultScanHalfWidth * 1e6, kDefaultScanHalfWidth * 1e6};
  m.b_ = eng.b;
  m.tmap_ = [](double t) { return t; };
  return m;
}

AeptMap compose_aept(const ClassicalBasis& basis1, const ClassicalBasis& basis2) {
  if (basis1.system().const_omega)
    return AeptMap::to_harmonic(basis2, *basis1.system().const_omega, 0.0);

  // General composition: invert system 1's tau map pointwise. Patch-local.
  auto a1 = std::make_shared<ArnoldMap>(basis1);
  auto a2 = std::make_shared<ArnoldMap>(basis2);
  auto b1 = std::make_shared<const ClassicalBasis>(basis1);
  auto b2 = std::make_shared<const ClassicalBasis>(basis2);

  AeptMap m;
  m.sys1_ = basis1.system();
  m.sys2_ = basis2.system();
  m.omega0_ = basis1.system().const_omega;

  auto tmap = [a1, a2](double t2) { return a1->t_of_tau(a2->tau(t2)); };
  m.tmap_ = tmap;

  // Restrict the span so that tau2 stays within the image of system 1's patch.
  auto [lo2, hi2] = a2->patch();
  auto [lo1, hi1] = a1->patch();
  const double eps = 1e-9;
  double lo = lo2, hi = hi2;
  const double tau1_lo = b1->u1(lo1 + eps * (hi1 - lo1)) / b1->u2(lo1 + eps * (hi1 - lo1));
  const double tau1_hi = b1->u1(hi1 - eps * (hi1 - lo1)) / b1->u2(hi1 - eps * (hi1 - lo1));
  auto tau2 = [a2](double t) { return a2->tau(t); };
  // Shrink the bracket ends until tau2 fits inside [tau1_lo, tau1_hi].
  double step = (hi2 - lo2) * 1e-4;
  lo += step;
  hi -= step;
  while (lo < 0.0 && tau2(lo) < tau1_lo) lo += step;
  while (hi > 0.0 && tau2(hi) > tau1_hi) hi -= step;
  m.span_ = {lo, hi};

  auto bval = [b1, b2, tmap](double t2) {
    return b2->u2(t2) / b1->u2(tmap(t2));
  };
  auto bder = [b1, b2, tmap, bval](double t2) {
    const double t1 = tmap(t2);
    const double b = bval(t2);
    const double dt1 =
        b2->system().wronskian_of(t2) / (b1->system().wronskian_of(t1) * b * b);
    return b2->du2(t2) / b1->u2(t1) -
           b2->u2(t2) * b1->du2(t1) * dt1 / (b1->u2(t1) * b1->u2(t1));
  };
  Curve b;
  b.value = bval;
  b.deriv = bder;
  b.second = [bder](double t2) {
    const double h = 1e-5;
    return (bder(t2 + h) - bder(t2 - h)) / (2 * h);
  };
  m.b_ = b;
  return m;
}

Curve b_from_basis(const ClassicalBasis& basis, double omega0) {
  if (omega0 < 0.0) throw ValidationError("b_from_basis: omega0 must be >= 0");
  return tilde_b_curve(std::make_shared<const ClassicalBasis>(basis), omega0, 0.0);
}

double time_map_arctan(const ClassicalBasis& basis, double omega0, double t) {
  if (omega0 <= 0.0)
    throw ValidationError("time_map_arctan: omega0 must be > 0");
  auto b = std::make_shared<const ClassicalBasis>(basis);
  UnwrappedAngle theta(b, omega0, 0.0,
                       {std::min(0.0, t), std::max(0.0, t)});
  return theta(t) / omega0;
}

double ermakov_residual(const Curve& b, const LsodeSystem& sys2,
                        const LsodeSystem& sys1, double t,
                        const ClassicalBasis* basis1,
                        const std::function<double(double)>& time_map) {
  const double t1 = time_map ? time_map(t) : t;
  const double bt = b.value(t);
  const double W2 = sys2.wronskian_of(t);
  const double W1 = sys1.wronskian_of(t1);
  const double fd1 = sys1.fdot(t1);

  double bracket = sys1.omega_sq(t1);
  if (fd1 != 0.0) {
    if (!basis1)
      throw ValidationError(
          "ermakov_residual: basis1 required for a damped system 1");
    const double ratio = basis1->du2(t1) / basis1->u2(t1);
    bracket += fd1 * ratio * (1.0 - bt * bt * W1 / W2);
  }

  const double lhs = b.second(t) + sys2.fdot(t) * b.deriv(t) + sys2.omega_sq(t) * bt;
  const double rhs = (W2 * W2) / (W1 * W1) / (bt * bt * bt) * bracket;
  return lhs - rhs;
}

Curve pinney_superposition(const Curve& y1, const Curve& y2,
                           const PinneyCoefficients& c) {
  if (c.omega0_sq() < 0.0)
    throw ValidationError("pinney_superposition: c1 c2 - c3^2 must be >= 0");
  auto q = [y1, y2, c](double t) {
    const double a = y1.value(t), b = y2.value(t);
    return c.c1 * a * a + c.c2 * b * b + 2.0 * c.c3 * a * b;
  };
  auto dq = [y1, y2, c](double t) {
    const double a = y1.value(t), b = y2.value(t);
    const double da = y1.deriv(t), db = y2.deriv(t);
    return 2.0 * (c.c1 * a * da + c.c2 * b * db + c.c3 * (da * b + a * db));
  };
  auto ddq = [y1, y2, c](double t) {
    const double a = y1.value(t), b = y2.value(t);
    const double da = y1.deriv(t), db = y2.deriv(t);
    const double dda = y1.second(t), ddb = y2.second(t);
    return 2.0 * (c.c1 * (da * da + a * dda) + c.c2 * (db * db + b * ddb) +
                  c.c3 * (dda * b + 2.0 * da * db + a * ddb));
  };
  auto guard = [q](double t) {
    const double v = q(t);
    if (v <= 0.0)
      throw NonPositive("pinney_superposition: quadratic form not positive");
    return v;
  };
  Curve out;
  out.value = [guard](double t) { return std::sqrt(guard(t)); };
  out.deriv = [guard, dq](double t) { return dq(t) / (2.0 * std::sqrt(guard(t))); };
  out.second = [guard, dq, ddq](double t) {
    const double bt = std::sqrt(guard(t));
    const double db = dq(t) / (2.0 * bt);
    return (ddq(t) - 2.0 * db * db) / (2.0 * bt);
  };
  return out;
}

double classical_lewis(double x, double xdot, double b, double bdot, double m,
                       double omega0, double wronskian) {
  if (b <= 0.0) throw ValidationError("classical_lewis: b must be positive");
  const double p1 = m * (xdot * b - bdot * x) / wronskian;
  const double x1 = x / b;
  return p1 * p1 / (2.0 * m) + 0.5 * m * omega0 * omega0 * x1 * x1;
}

EngineeredAept engineer_b_from_wronskian(const LsodeSystem& sys2) {
  EngineeredAept out;
  LsodeSystem s2 = sys2;
  out.b.value = [s2](double t) { return std::exp(-0.5 * s2.f(t)); };
  out.b.deriv = [s2](double t) {
    return -0.5 * s2.fdot(t) * std::exp(-0.5 * s2.f(t));
  };
  out.b.second = [s2](double t) {
    const double fd = s2.fdot(t);
    return (0.25 * fd * fd - 0.5 * s2.fddot(t)) * std::exp(-0.5 * s2.f(t));
  };

  LsodeSystem aux;
  aux.fdot = [](double) { return 0.0; };
  aux.f = [](double) { return 0.0; };
  aux.fddot_fn = [](double) { return 0.0; };
  aux.lambda = [](double) { return 0.0; };
  aux.omega_sq = [s2](double t) {
    const double fd = s2.fdot(t);
    return s2.omega_sq(t) - 0.25 * fd * fd - 0.5 * s2.fddot(t);
  };
  aux.mass = sys2.mass;
  aux.kind = SystemKind::custom;
  switch (sys2.kind) {
    case SystemKind::free_particle:
      aux.const_omega = 0.0;
      break;
    case SystemKind::harmonic:
      aux.const_omega = sys2.const_omega;
      break;
    case SystemKind::caldirola_kanai: {
      // f'' = 0, so the auxiliary frequency Omega is constant.
      const double w2 = sys2.omega_sq(0.0);
      const double g = sys2.fdot(0.0);
      const double d = w2 - 0.25 * g * g;
      if (d > 0.0) aux.const_omega = std::sqrt(d);
      break;
    }
    default:
      break;
  }
  out.auxiliary = aux;
  return out;
}

}  // namespace qaept
