#include "qaept/quantum.hpp"

#include <cmath>

#include "qaept/specfun.hpp"

namespace qaept {

using cplx = std::complex<double>;

WaveFunction qat_forward(const WaveFunction& psi, const ClassicalBasis& basis) {
  const double t = psi.t();
  ArnoldMap arnold(basis);
  if (!arnold.in_patch(t))
    throw FocalPoint("qat_forward: t outside the Arnold patch");

  const double u2 = basis.u2(t);
  const double du2 = basis.du2(t);
  const double up = basis.up(t);
  const double W = basis.system().wronskian_of(t);
  const double tau = basis.u1(t) / u2;

  const double k_min = (psi.grid().x_min() - up) / u2;
  const double k_max = (psi.grid().x_max() - up) / u2;
  if (std::abs(k_min) > 1e7 || std::abs(k_max) > 1e7)
    throw GridOverflow("qat_forward: rescaled grid out of representable range");

  const double m = psi.consts().m, hbar = psi.consts().hbar;
  const double phase_coef = -0.5 * m / hbar * du2 / (W * u2);

  WaveFunction out(Grid(k_min, k_max, psi.grid().n()), tau, psi.consts());
  const double root = std::sqrt(u2);
  for (int i = 0; i < psi.grid().n(); ++i) {
    const double x = psi.grid().x(i);
    out[i] = root * std::polar(1.0, phase_coef * x * x) * psi[i];
  }
  return out;
}

namespace {

struct MapFactors {
  double b, bdot, W2;
};

MapFactors factors_at(const AeptMap& map, double t2) {
  MapFactors f{map.b(t2), map.b_dot(t2), map.wronskian_source(t2)};
  if (!(f.b > 0.0)) throw NumericError("qaept map: b(t) not positive");
  if (f.b > 1e6 || f.b < 1e-6)
    throw GridOverflow("qaept map: rescale factor b out of representable range");
  return f;
}

void fill_diagnostics(MapDiagnostics* diag, const WaveFunction& in,
                      const WaveFunction& out, int zeroed) {
  if (!diag) return;
  const double n_in = in.norm(), n_out = out.norm();
  diag->leakage =
      n_in > 0.0 ? std::abs(n_out * n_out - n_in * n_in) / (n_in * n_in) : 0.0;
  diag->zeroed_samples = zeroed;
}

}  // namespace

WaveFunction qaept_apply(const WaveFunction& psi2, const AeptMap& map,
                         MapDiagnostics* diag) {
  const double t2 = psi2.t();
  if (!map.contains(t2)) throw OutOfSpan("qaept_apply: t outside the map span");
  const auto f = factors_at(map, t2);
  const double t1 = map.time_map(t2);
  const double m = psi2.consts().m, hbar = psi2.consts().hbar;
  const double phase_coef = -0.5 * m / hbar * f.bdot / (f.W2 * f.b);
  const double root = std::sqrt(f.b);

  WaveFunction out(psi2.grid(), t1, psi2.consts());
  int zeroed = 0;
  for (int i = 0; i < psi2.grid().n(); ++i) {
    const double x2 = f.b * psi2.grid().x(i);
    if (x2 < psi2.grid().x_min() || x2 > psi2.grid().x_max()) {
      ++zeroed;
      continue;
    }
    out[i] = root * std::polar(1.0, phase_coef * x2 * x2) * interpolate(psi2, x2);
  }
  fill_diagnostics(diag, psi2, out, zeroed);
  return out;
}

WaveFunction qaept_inverse(const WaveFunction& phi1, const AeptMap& map,
                           MapDiagnostics* diag) {
  const double t2 = map.time_map_inverse(phi1.t());
  const auto f = factors_at(map, t2);
  const double m = phi1.consts().m, hbar = phi1.consts().hbar;
  const double phase_coef = 0.5 * m / hbar * f.bdot / (f.W2 * f.b);
  const double root = 1.0 / std::sqrt(f.b);

  WaveFunction out(phi1.grid(), t2, phi1.consts());
  int zeroed = 0;
  for (int i = 0; i < phi1.grid().n(); ++i) {
    const double x2 = phi1.grid().x(i);
    const double x1 = x2 / f.b;
    if (x1 < phi1.grid().x_min() || x1 > phi1.grid().x_max()) {
      ++zeroed;
      continue;
    }
    out[i] = root * std::polar(1.0, phase_coef * x2 * x2) * interpolate(phi1, x1);
  }
  fill_diagnostics(diag, phi1, out, zeroed);
  return out;
}

WaveFunction ho_eigenstate(int n, double omega0, double t, const Grid& grid,
                           PhysicalConstants consts) {
  if (n < 0) throw ValidationError("ho_eigenstate: n must be nonnegative");
  if (omega0 <= 0.0)
    throw ValidationError("ho_eigenstate: omega0 must be positive");
  const double width = std::sqrt(consts.hbar * (2 * n + 1) / (consts.m * omega0));
  if (grid.x_max() < 6.0 * width)
    throw GridTooNarrow("ho_eigenstate: grid narrower than 6 state widths");

  const double xi_scale = std::sqrt(consts.m * omega0 / consts.hbar);
  WaveFunction out(grid, t, consts);
  for (int i = 0; i < grid.n(); ++i) {
    const double xi = xi_scale * grid.x(i);
    out[i] = specfun::hermite_poly(n, xi) * std::exp(-0.5 * xi * xi);
  }
  out.normalize();
  const cplx phase = std::polar(1.0, -(n + 0.5) * omega0 * t);
  for (int i = 0; i < grid.n(); ++i) out[i] *= phase;
  return out;
}

WaveFunction dm_eigenstate(const ClassicalBasis& basis, double omega_tilde,
                           double gamma_tilde, int n, double t, const Grid& grid,
                           PhysicalConstants consts) {
  if (n < 0) throw ValidationError("dm_eigenstate: n must be nonnegative");
  const double oc2 = omega_tilde * omega_tilde - 0.25 * gamma_tilde * gamma_tilde;
  if (oc2 <= 0.0)
    throw ContinuousSpectrum(
        "dm_eigenstate: discrete regime needs omega_tilde^2 > gamma_tilde^2/4");
  const double oc = std::sqrt(oc2);

  // b~, b~' and the continuously unwrapped angle theta = Omega~ t1 come from
  // the harmonic-target transformation characterized by the same (w~, g~).
  // The quadratic phase of the eigenstate display,
  //   Omega~^2 u1/(u2~ b~^2) + u2~'/(u2~ W) = b~'/(b~ W),
  // is evaluated in the right-hand form, which is regular at zeros of u2~.
  auto map = AeptMap::to_harmonic(basis, omega_tilde, gamma_tilde);
  const double b = map.b(t);
  const double bdot = map.b_dot(t);
  const double W = basis.system().wronskian_of(t);
  const double theta = oc * map.time_map(t);

  const double m = consts.m, hbar = consts.hbar;
  const double chirp = 0.5 * m / hbar * bdot / (b * W);
  const double gauss_coef = 0.5 * m * oc / hbar / (b * b);
  const double herm_scale = std::sqrt(m * oc / hbar) / b;

  WaveFunction out(grid, t, consts);
  for (int i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    out[i] = specfun::hermite_poly(n, herm_scale * x) *
             std::exp(-gauss_coef * x * x) * std::polar(1.0, chirp * x * x);
  }
  out.normalize();
  const cplx phase = std::polar(1.0, -(n + 0.5) * theta);
  for (int i = 0; i < grid.n(); ++i) out[i] *= phase;
  return out;
}

WaveFunction ck_eigenstate(int n, double gamma, double omega, double t,
                           const Grid& grid, PhysicalConstants consts) {
  if (n < 0) throw ValidationError("ck_eigenstate: n must be nonnegative");
  const double disc = omega * omega - 0.25 * gamma * gamma;
  if (disc <= 0.0)
    throw Overdamped("ck_eigenstate: requires the underdamped regime");
  const double om = std::sqrt(disc);

  const double m = consts.m, hbar = consts.hbar;
  const double growth = std::exp(gamma * t);
  const double width = std::sqrt(hbar * (2 * n + 1) / (m * om * growth));
  if (grid.x_max() < 4.0 * width)
    throw GridTooNarrow("ck_eigenstate: grid narrower than 4 state widths");

  const double herm_scale = std::sqrt(m * om / hbar) * std::exp(0.5 * gamma * t);
  const cplx width_coef = 0.5 * m / hbar * cplx(om, 0.5 * gamma) * growth;

  WaveFunction out(grid, t, consts);
  for (int i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    out[i] =
        specfun::hermite_poly(n, herm_scale * x) * std::exp(-width_coef * x * x);
  }
  out.normalize();
  // Of e^{-i(n Omega + (Omega + i gamma/2)/2) t} only the oscillatory part
  // survives: the grid renormalization absorbs the real e^{gamma t/4} growth.
  const cplx phase = std::polar(1.0, -(n + 0.5) * om * t);
  for (int i = 0; i < grid.n(); ++i) out[i] *= phase;
  return out;
}

double lewis_phase(double lambda_s, const Curve& b, double t,
                   PhysicalConstants consts,
                   const std::function<double(double)>& weight) {
  auto integrand = [&](double s) {
    const double bs = b.value(s);
    if (!(bs > 0.0)) throw NumericError("lewis_phase: b must stay positive");
    const double w = weight ? weight(s) : 1.0;
    return w / (bs * bs);
  };
  // Composite Simpson; the integrand is smooth and positive.
  const int steps = std::max(2000, static_cast<int>(std::abs(t) * 4000));
  const double h = t / steps;
  double s = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = i * h;
    s += h / 6.0 *
         (integrand(x) + 4.0 * integrand(x + 0.5 * h) + integrand(x + h));
  }
  return -lambda_s / consts.hbar * s;
}

}  // namespace qaept
