#pragma once

#include <vector>

#include "qaept/lsode.hpp"
#include "qaept/wavefunction.hpp"

// Direct numerical integrator of the GCK Schroedinger equation. This is the
// verification oracle for the analytic constructions: it consumes only the
// LsodeSystem coefficients, never a ClassicalBasis or a transformation.

namespace qaept {

struct PropagationConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  int store_every = 1;
  double boundary_tol = 1e-6;
};

/// One Crank-Nicolson step with the midpoint Hamiltonian:
///   psi(t+dt) = (1 + i H(t+dt/2) dt/2hbar)^{-1} (1 - i H(t+dt/2) dt/2hbar) psi.
/// Pentadiagonal banded solve; exactly norm-preserving up to rounding.
WaveFunction crank_nicolson_step(const WaveFunction& psi, const LsodeSystem& sys,
                                 PhysicalConstants consts, double t, double dt);

struct Trajectory {
  std::vector<WaveFunction> states;  // stored every cfg.store_every steps
  std::vector<double> times;
  std::vector<double> norms;
};

/// Propagates from psi.t() to cfg.t_final. The initial state must be confined
/// (edge amplitude below cfg.boundary_tol); a BoundaryLeak aborts the run if
/// any step pushes amplitude into the grid edges.
Trajectory propagate(const WaveFunction& psi0, const LsodeSystem& sys,
                     PhysicalConstants consts, const PropagationConfig& cfg);

/// |<a|b>| with both states renormalized first.
double fidelity(const WaveFunction& a, const WaveFunction& b);

}  // namespace qaept
