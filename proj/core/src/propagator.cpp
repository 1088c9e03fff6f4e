#include "qaept/propagator.hpp"

#include <cmath>

#include "qaept/banded.hpp"

namespace qaept {

using cplx = std::complex<double>;

namespace {

// Pentadiagonal band of the GCK Hamiltonian (4th-order 5-point Laplacian,
// Dirichlet boundaries). off-diagonal entries are x-independent.
struct HamiltonianBand {
  double diag_kin, off1, off2;     // kinetic part
  std::vector<double> potential;   // diagonal potential

  HamiltonianBand(const LsodeSystem& sys, const Grid& grid,
                  PhysicalConstants consts, double t)
      : potential(grid.n()) {
    const double W = sys.wronskian_of(t);
    const double kin = -consts.hbar * consts.hbar / (2.0 * consts.m) * W;
    const double h2 = grid.dx() * grid.dx();
    diag_kin = kin * (-30.0 / (12.0 * h2));
    off1 = kin * (16.0 / (12.0 * h2));
    off2 = kin * (-1.0 / (12.0 * h2));
    const double ef = 1.0 / W;
    const double w2 = sys.omega_sq(t);
    const double lam = sys.lambda(t);
    for (int i = 0; i < grid.n(); ++i) {
      const double x = grid.x(i);
      potential[i] = ef * (0.5 * consts.m * w2 * x * x - consts.m * lam * x);
    }
  }

  double entry(int i, int offset) const {
    switch (offset) {
      case 0:
        return diag_kin + potential[i];
      case 1:
      case -1:
        return off1;
      default:
        return off2;
    }
  }
};

}  // namespace

WaveFunction crank_nicolson_step(const WaveFunction& psi, const LsodeSystem& sys,
                                 PhysicalConstants consts, double t, double dt) {
  if (dt <= 0.0) throw ValidationError("crank_nicolson_step: dt must be > 0");
  const int n = psi.grid().n();
  const HamiltonianBand H(sys, psi.grid(), consts, t + 0.5 * dt);
  const cplx ilam(0.0, 0.5 * dt / consts.hbar);

  // rhs = (1 - i lam H) psi
  std::vector<cplx> rhs(n);
  for (int i = 0; i < n; ++i) {
    cplx acc = (1.0 - ilam * H.entry(i, 0)) * psi[i];
    if (i >= 1) acc -= ilam * H.off1 * psi[i - 1];
    if (i >= 2) acc -= ilam * H.off2 * psi[i - 2];
    if (i + 1 < n) acc -= ilam * H.off1 * psi[i + 1];
    if (i + 2 < n) acc -= ilam * H.off2 * psi[i + 2];
    rhs[i] = acc;
  }

  BandedLU lu(n, 2, 2);
  for (int i = 0; i < n; ++i) {
    lu.at(i, 0) = 1.0 + ilam * H.entry(i, 0);
    if (i >= 1) lu.at(i, -1) = ilam * H.off1;
    if (i >= 2) lu.at(i, -2) = ilam * H.off2;
    if (i + 1 < n) lu.at(i, 1) = ilam * H.off1;
    if (i + 2 < n) lu.at(i, 2) = ilam * H.off2;
  }
  lu.factor();
  lu.solve(rhs);

  WaveFunction out(psi.grid(), t + dt, psi.consts());
  for (int i = 0; i < n; ++i) out[i] = rhs[i];
  return out;
}

Trajectory propagate(const WaveFunction& psi0, const LsodeSystem& sys,
                     PhysicalConstants consts, const PropagationConfig& cfg) {
  if (cfg.dt <= 0.0) throw ValidationError("propagate: dt must be > 0");
  if (cfg.store_every < 1)
    throw ValidationError("propagate: store_every must be >= 1");
  if (psi0.boundary_amplitude() > cfg.boundary_tol)
    throw ValidationError("propagate: initial state not confined");
  const double t0 = psi0.t();
  if (!(cfg.t_final > t0))
    throw ValidationError("propagate: t_final must exceed the initial time");

  const long n_steps = std::lround((cfg.t_final - t0) / cfg.dt);

  Trajectory traj;
  traj.states.push_back(psi0);
  traj.times.push_back(t0);
  traj.norms.push_back(psi0.norm());

  WaveFunction psi = psi0;
  for (long k = 0; k < n_steps; ++k) {
    const double t = t0 + k * cfg.dt;
    psi = crank_nicolson_step(psi, sys, consts, t, cfg.dt);
    if (psi.boundary_amplitude() > cfg.boundary_tol)
      throw BoundaryLeak("propagate: boundary amplitude exceeded boundary_tol at t = " +
                         std::to_string(psi.t()));
    if ((k + 1) % cfg.store_every == 0 || k + 1 == n_steps) {
      traj.states.push_back(psi);
      traj.times.push_back(psi.t());
      traj.norms.push_back(psi.norm());
    }
  }
  return traj;
}

double fidelity(const WaveFunction& a, const WaveFunction& b) {
  if (!a.grid().same_as(b.grid())) throw GridMismatch("fidelity: grids differ");
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0)
    throw ValidationError("fidelity: zero-norm state");
  return std::abs(inner_product(a, b)) / (na * nb);
}

}  // namespace qaept
