#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "qaept/curve.hpp"
#include "qaept/lsode.hpp"

namespace qaept {

/// Classical Arnold transformation (x,t) -> (kappa,tau) built from a
/// canonical basis, restricted to the maximal interval around t = 0 on which
/// u2 > 0 (the "patch"; its ends are focal points).
class ArnoldMap {
 public:
  /// `scan_window` bounds the focal-point search; by default the basis span
  /// clipped to |t| <= 40.
  explicit ArnoldMap(const ClassicalBasis& basis,
                     std::optional<std::pair<double, double>> scan_window = {});

  const ClassicalBasis& basis() const { return *basis_; }
  std::pair<double, double> patch() const { return {patch_lo_, patch_hi_}; }
  bool in_patch(double t) const;

  /// tau(t) = u1/u2; strictly increasing on the patch.
  double tau(double t) const;

  /// Inverse of tau by bisection refined with Newton on u1 - tau u2.
  double t_of_tau(double tau) const;

 private:
  std::shared_ptr<const ClassicalBasis> basis_;
  double patch_lo_, patch_hi_;
  bool lo_is_focal_, hi_is_focal_;  // whether the patch end is a zero of u2
};

/// (kappa, tau) = ((x - up)/u2, u1/u2). Throws FocalPoint outside the patch.
std::pair<double, double> arnold_forward(const ArnoldMap& map, double x, double t);

/// Inverse map; throws OutOfImage if tau is not attained on the patch.
std::pair<double, double> arnold_inverse(const ArnoldMap& map, double kappa,
                                         double tau);

/// Arnold-Ermakov-Pinney transformation from a source system (system 2) to an
/// auxiliary target (system 1): x1 = x2/b(t2), W1 dt1 = (W2/b^2) dt2.
class AeptMap {
 public:
  double b(double t2) const { return b_.value(t2); }
  double b_dot(double t2) const { return b_.deriv(t2); }
  double b_ddot(double t2) const { return b_.second(t2); }
  const Curve& b_curve() const { return b_; }

  /// t1 as a function of t2; strictly increasing, continuous across focal
  /// points of the source system.
  double time_map(double t2) const { return tmap_(t2); }
  double time_map_inverse(double t1) const;

  double wronskian_source(double t2) const { return sys2_.wronskian_of(t2); }
  double wronskian_target(double t1) const { return sys1_.wronskian_of(t1); }

  const LsodeSystem& source_system() const { return sys2_; }
  const LsodeSystem& target_system() const { return sys1_; }

  /// Constant frequency of the target system when it has one.
  std::optional<double> omega0() const { return omega0_; }

  std::pair<double, double> span() const { return span_; }
  bool contains(double t2) const;

  /// Map to the harmonic oscillator with frequency
  /// Omega~ = sqrt(omega_tilde^2 - gamma_tilde^2/4), characterized by
  /// b~ = sqrt((u2 - gamma_tilde u1/2)^2 + Omega~^2 u1^2). The time map is the
  /// branch-unwrapped arctan, globally defined. gamma_tilde = 0 gives the
  /// canonical b of `b_from_basis`; omega_tilde = gamma_tilde = 0 degenerates
  /// to the ordinary Arnold map (free-particle target, patch-local).
  static AeptMap to_harmonic(const ClassicalBasis& source, double omega_tilde,
                             double gamma_tilde = 0.0);

  /// Map with b = W2^{1/2}: the target is the undamped system with
  /// w1^2 = w2^2 - f2'^2/4 - f2''/2 and the time map is the identity.
  static AeptMap engineered(const LsodeSystem& source);

 private:
  AeptMap() = default;
  friend AeptMap compose_aept(const ClassicalBasis&, const ClassicalBasis&);

  Curve b_;
  std::function<double(double)> tmap_;
  LsodeSystem sys1_, sys2_;
  std::optional<double> omega0_;
  std::pair<double, double> span_ = {0.0, 0.0};
};

/// E = A1^{-1} A2. When system 1 is an undamped constant-frequency system the
/// globally defined harmonic-target construction is used; otherwise the
/// composition is patch-local and obtained by inverting system 1's tau map.
AeptMap compose_aept(const ClassicalBasis& basis1, const ClassicalBasis& basis2);

/// b(t) = sqrt(u2^2 + omega0^2 u1^2) with analytic derivatives; b(0) = 1,
/// b'(0) = 0 for a canonical basis.
Curve b_from_basis(const ClassicalBasis& basis, double omega0);

/// Branch-unwrapped time map t1(t) = (1/omega0) arctan(omega0 u1/u2), made
/// continuous by adding pi/omega0 at every zero of u2 crossed between 0 and t.
double time_map_arctan(const ClassicalBasis& basis, double omega0, double t);

/// Left-minus-right side of the generalized Ermakov equation
///   b'' + f2' b' + w2^2 b =
///     (W2^2/W1^2)(1/b^3) [w1^2 + f1' (u2^(1)'/u2^(1)) (1 - b^2 W1/W2)],
/// with system-1 quantities evaluated at t1 = time_map(t) (identity when no
/// map is given). basis1 is only needed when system 1 is damped.
double ermakov_residual(const Curve& b, const LsodeSystem& sys2,
                        const LsodeSystem& sys1, double t,
                        const ClassicalBasis* basis1 = nullptr,
                        const std::function<double(double)>& time_map = {});

/// Pinney superposition coefficients, constrained by c1 c2 - c3^2 = omega0^2.
struct PinneyCoefficients {
  double c1 = 0, c2 = 0, c3 = 0;
  double omega0_sq() const { return c1 * c2 - c3 * c3; }
};

/// b = sqrt(c1 y1^2 + c2 y2^2 + 2 c3 y1 y2). Throws NonPositive if the
/// quadratic form is not positive at an evaluation point.
Curve pinney_superposition(const Curve& y1, const Curve& y2,
                           const PinneyCoefficients& c);

/// Lewis invariant value at a phase point. `wronskian` generalizes the
/// undamped form (W = 1): I = (1/2m)(m(x' b - b' x)/W)^2 + m w0^2 x^2/(2 b^2).
double classical_lewis(double x, double xdot, double b, double bdot, double m,
                       double omega0, double wronskian = 1.0);

/// Result of choosing b = W2^{1/2}: the auxiliary system is undamped with
/// w1^2(t) = w2^2(t) - f2'(t)^2/4 - f2''(t)/2 and the time map is the identity.
struct EngineeredAept {
  Curve b;
  LsodeSystem auxiliary;
};
EngineeredAept engineer_b_from_wronskian(const LsodeSystem& sys2);

}  // namespace qaept
