#pragma once

#include <complex>

#include "qaept/arnold.hpp"
#include "qaept/lsode.hpp"
#include "qaept/wavefunction.hpp"

namespace qaept {

/// Reported by the pullback maps: relative norm deficit caused by target
/// samples that fall outside the source support.
struct MapDiagnostics {
  double leakage = 0.0;
  int zeroed_samples = 0;
};

/// Quantum Arnold transformation: psi(x,t) of the source system mapped to the
/// free-particle wavefunction phi(kappa, tau), kappa-grid = (x-grid - up)/u2.
/// The output lives on the rescaled grid (no interpolation); unitary.
WaveFunction qat_forward(const WaveFunction& psi, const ClassicalBasis& basis);

/// Quantum Arnold-Ermakov-Pinney transformation, system 2 -> system 1:
///   phi1(x1, t1) = sqrt(b) e^{-(i/2)(m/hbar)(b'/(W2 b)) x2^2} phi(x2, t2),
/// pulled back to the same grid (x2 = b x1) by band-limited interpolation.
WaveFunction qaept_apply(const WaveFunction& psi2, const AeptMap& map,
                         MapDiagnostics* diag = nullptr);

/// Inverse transformation, system 1 -> system 2:
///   phi(x, t) = (1/sqrt b) e^{(i/2)(m/hbar)(b'/(W2 b)) x^2} phi1(x/b, t1).
WaveFunction qaept_inverse(const WaveFunction& phi1, const AeptMap& map,
                           MapDiagnostics* diag = nullptr);

/// Stationary state psi_n(x) e^{-i(n+1/2) w0 t} of the harmonic oscillator,
/// grid-normalized. Throws GridTooNarrow if the grid cannot confine it.
WaveFunction ho_eigenstate(int n, double omega0, double t, const Grid& grid,
                           PhysicalConstants consts);

/// Eigenstate of the quadratic invariant I(omega~, gamma~) for the system the
/// basis solves, eigenvalue hbar Omega~ (n + 1/2). The complex power
/// ((u2~ - i Omega~ u1)/b~)^{n+1/2} is evaluated with a continuously tracked
/// phase so the state stays smooth across zeros of u2~.
WaveFunction dm_eigenstate(const ClassicalBasis& basis, double omega_tilde,
                           double gamma_tilde, int n, double t, const Grid& grid,
                           PhysicalConstants consts);

/// Caldirola-Kanai eigenstate (underdamped), the closed form
///   e^{-i(n Omega + (Omega + i gamma/2)/2) t}
///   e^{-(m/2hbar)(Omega + i gamma/2) e^{gamma t} x^2}
///   H_n(sqrt(m Omega/hbar) e^{gamma t/2} x),  grid-normalized.
WaveFunction ck_eigenstate(int n, double gamma, double omega, double t,
                           const Grid& grid, PhysicalConstants consts);

/// Lewis-Riesenfeld phase alpha_s(t) = -(lambda_s/hbar) int_0^t weight/b^2 dt;
/// the default weight 1 is the undamped convention, pass the Wronskian for
/// damped systems.
double lewis_phase(double lambda_s, const Curve& b, double t,
                   PhysicalConstants consts,
                   const std::function<double(double)>& weight = {});

}  // namespace qaept
