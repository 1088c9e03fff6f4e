#pragma once

#include <Eigen/Dense>
#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "qaept/lsode.hpp"
#include "qaept/wavefunction.hpp"

namespace qaept {

/// Dense operator representation on a grid at a fixed time.
struct OperatorMatrix {
  Eigen::MatrixXcd mat;
  double t = 0.0;
  bool hermitian = false;

  /// max |M - M^dagger| over all entries.
  double hermiticity_defect() const;
};

/// Coefficients (omega~, gamma~) of the quadratic invariant
///   I = P^2/2m + (1/2) m omega~^2 X^2 + (gamma~/2)(XP + PX)/2.
struct InvariantSpec {
  double omega_tilde = 0.0;
  double gamma_tilde = 0.0;

  /// Omega~^2 = omega~^2 - gamma~^2/4; the spectrum is discrete iff > 0.
  double omega_cap_sq() const {
    return omega_tilde * omega_tilde - 0.25 * gamma_tilde * gamma_tilde;
  }
  bool discrete() const { return omega_cap_sq() > 0.0; }

  static InvariantSpec lewis(double omega0) { return {omega0, 0.0}; }
  static InvariantSpec dodonov_manko(double gamma, double omega) {
    return {omega, gamma};
  }
};

/// H = (p^2/2m) e^{-f} + ((1/2) m w^2 x^2 - m L x) e^{f} with a 5-point
/// 4th-order Laplacian and Dirichlet boundaries.
OperatorMatrix build_gck_hamiltonian(const LsodeSystem& sys, const Grid& grid,
                                     PhysicalConstants consts, double t);

/// Conserved position X = (u1'/W) x + (i hbar/m) u1 d/dx; reduces to x at t=0.
OperatorMatrix conserved_position(const ClassicalBasis& basis, const Grid& grid,
                                  PhysicalConstants consts, double t);

/// Conserved momentum P = -i hbar u2 d/dx - m x u2'/W; reduces to p at t=0.
OperatorMatrix conserved_momentum(const ClassicalBasis& basis, const Grid& grid,
                                  PhysicalConstants consts, double t);

/// The invariant assembled by expanding P^2/2m + (1/2)m w~^2 X^2 +
/// (g~/2) sym(XP) in the shared difference stencils, so that the kinetic part
/// uses the same Laplacian matrix as the Hamiltonian.
OperatorMatrix build_invariant(const InvariantSpec& spec,
                               const ClassicalBasis& basis, const Grid& grid,
                               PhysicalConstants consts, double t);

/// Invariant coefficients produced by the b = W^{1/2} engineering:
/// omega~^2 = w2(0)^2 - f2''(0)/2, gamma~ = f2'(0).
InvariantSpec gdm_from_engineering(const LsodeSystem& sys);

/// Max amplitude, over a battery of smooth normalized probe states and
/// interior grid rows, of [(I(t+dt) - I(t-dt))/(2dt) + (i/hbar)[H(t), I(t)]]
/// applied to the probe. Boundary stencil rows are excluded.
double invariance_residual(const InvariantSpec& spec, const ClassicalBasis& basis,
                           const LsodeSystem& sys, const Grid& grid,
                           PhysicalConstants consts, double t, double dt);

/// Trapezoidal <psi|O|psi>; real to rounding for Hermitian O.
std::complex<double> expectation(const OperatorMatrix& op, const WaveFunction& psi);

/// The k smallest eigenvalues of a Hermitian operator (dense solve).
std::vector<double> lowest_eigenvalues(const OperatorMatrix& op, int k);

/// {"system": ..., "spec": {...}, "t": ..., "eigenvalues": [...]} export.
void write_spectrum_json(const std::string& system_name, const InvariantSpec& spec,
                         double t, const std::vector<double>& eigenvalues,
                         const std::filesystem::path& path);

}  // namespace qaept
