#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "qaept/curve.hpp"
#include "qaept/errors.hpp"
#include "qaept/ode45.hpp"
#include "qaept/specfun.hpp"

namespace qaept {

enum class SystemKind {
  free_particle,
  harmonic,
  caldirola_kanai,
  hermite,
  lane_emden,
  custom,
};

/// A linear second-order system  x'' + f'(t) x' + w^2(t) x = L(t)  together
/// with the mass of the associated (Generalized Caldirola-Kanai) quantum
/// model. Both the damping coefficient f' and its antiderivative f are
/// stored; f(0) = 0 fixes the gauge so that the Wronskian starts at 1.
struct LsodeSystem {
  std::function<double(double)> fdot;      // damping coefficient [1/time]
  std::function<double(double)> omega_sq;  // squared frequency [1/time^2]
  std::function<double(double)> lambda;    // forcing [length/time^2]
  std::function<double(double)> f;         // antiderivative of fdot, f(0)=0
  double mass = 1.0;
  SystemKind kind = SystemKind::custom;

  /// Frequency of an undamped constant-coefficient system (0 for the free
  /// particle), empty otherwise. Used to recognize globally mappable
  /// auxiliary systems.
  std::optional<double> const_omega;

  /// Wronskian of any canonical solution pair: W(t) = e^{-f(t)}.
  double wronskian_of(double t) const;

  /// Second derivative of f; analytic for catalog systems with known f'',
  /// otherwise 5-point finite differences of fdot.
  double fddot(double t) const;

  std::function<double(double)> fddot_fn;  // optional analytic f''

  static LsodeSystem free_particle(double mass = 1.0);
  static LsodeSystem harmonic(double omega0, double mass = 1.0);
  static LsodeSystem caldirola_kanai(double gamma, double omega, double mass = 1.0);
  static LsodeSystem hermite(double alpha, double omega, double mass = 1.0);
};

/// Lane-Emden oscillator x'' + mu/(1+nu t) x' + omega0^2 x = 0, restricted to
/// t > -1/nu (the coefficient pole); f(t) = (mu/nu) ln(1+nu t).
LsodeSystem lane_emden_system(double mu, double nu, double omega0, double mass = 1.0);

enum class BasisSource { numeric, closed_form };

/// Canonical solution basis of an LSODE system:
///   u1(0)=0, u1'(0)=1, u2(0)=1, u2'(0)=0, up(0)=up'(0)=0,
/// with Wronskian u1'u2 - u1u2' = e^{-f}.
class ClassicalBasis {
 public:
  double u1(double t) const { return u1_(t); }
  double du1(double t) const { return du1_(t); }
  double u2(double t) const { return u2_(t); }
  double du2(double t) const { return du2_(t); }
  double up(double t) const { return up_(t); }
  double dup(double t) const { return dup_(t); }

  /// u1'u2 - u1u2' evaluated from the stored solutions.
  double wronskian(double t) const;

  const LsodeSystem& system() const { return sys_; }
  BasisSource source() const { return source_; }
  const std::vector<double>& t_grid() const { return t_grid_; }

  /// Interval on which the basis can be evaluated.
  std::pair<double, double> span() const { return span_; }
  bool contains(double t) const;

  /// Second derivatives recovered from the differential equation itself,
  /// u'' = L - f' u' - w^2 u (L only for up).
  double ddu1(double t) const;
  double ddu2(double t) const;

  ClassicalBasis(LsodeSystem sys, BasisSource source, std::vector<double> t_grid,
                 std::pair<double, double> span,
                 std::function<double(double)> u1, std::function<double(double)> du1,
                 std::function<double(double)> u2, std::function<double(double)> du2,
                 std::function<double(double)> up, std::function<double(double)> dup);

 private:
  LsodeSystem sys_;
  BasisSource source_;
  std::vector<double> t_grid_;
  std::pair<double, double> span_;
  std::function<double(double)> u1_, du1_, u2_, du2_, up_, dup_;
};

inline constexpr double kWronskianTol = 1e-8;

/// Integrates the canonical basis numerically over the given sample times
/// (t_grid[0] must be 0) and post-checks the Wronskian identity
/// |W - e^{-f}| <= wronskian_tol on the samples.
ClassicalBasis integrate_classical(const LsodeSystem& sys,
                                   const std::vector<double>& t_grid,
                                   const OdeTolerances& tol = {},
                                   double wronskian_tol = kWronskianTol);

/// Wronskian of a basis at time t; throws OutOfSpan outside the span.
double wronskian(const ClassicalBasis& basis, double t);

/// Closed-form Caldirola-Kanai basis (gamma, omega constant). Underdamped,
/// critical and overdamped branches are all provided analytically.
ClassicalBasis closed_form_ck(double gamma, double omega, double mass = 1.0);

/// Closed-form Hermite-oscillator basis built on 1F1:
///   u1 = t 1F1(1/2 + w^2/2a; 3/2; -a t^2/2),  u2 = 1F1(w^2/2a; 1/2; -a t^2/2),
/// derivatives via (d/dz)1F1(a;b;z) = (a/b) 1F1(a+1;b+1;z).
ClassicalBasis closed_form_hermite(double alpha, double omega, double mass = 1.0,
                                   const specfun::SeriesControl& ctl = {});

/// Closed-form free-particle basis: u1 = t, u2 = 1, up = 0.
ClassicalBasis closed_form_free(double mass = 1.0);

/// Closed-form harmonic basis: u1 = sin(w0 t)/w0, u2 = cos(w0 t).
ClassicalBasis closed_form_harmonic(double omega0, double mass = 1.0);

/// Number of simple zeros of u on [t_a, t_b], located by a sign-change scan
/// refined by bisection. If `grazing` is given it receives the number of
/// near-zero extrema that may hide a zero pair at the scan resolution.
int count_zeros(const std::function<double(double)>& u, double t_a, double t_b,
                int samples = 4001, int* grazing = nullptr,
                const std::function<double(double)>& du = {});

/// Zero locations (same scan) in increasing order.
std::vector<double> find_zeros(const std::function<double(double)>& u, double t_a,
                               double t_b, int samples = 4001);

/// The shifted solution u2 - (gamma_tilde/2) u1 and its derivatives.
Curve tilde_u2(const ClassicalBasis& basis, double gamma_tilde);

}  // namespace qaept
