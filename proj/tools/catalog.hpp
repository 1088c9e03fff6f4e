#pragma once

#include "config.hpp"
#include "qaept/arnold.hpp"
#include "qaept/invariants.hpp"
#include "qaept/lsode.hpp"

namespace qaept::cli {

/// Builds the configured LsodeSystem; "custom" reads the tabulated
/// coefficients (CSV columns t, fdot, omega_sq, lambda starting at t = 0).
LsodeSystem make_system(const RunConfig& cfg);

/// Canonical basis: closed form where the catalog has one, numerically
/// integrated otherwise, covering [0, t_max].
ClassicalBasis make_basis(const RunConfig& cfg, const LsodeSystem& sys,
                          double t_max);

/// Resolves the configured invariant kind to concrete coefficients:
/// lewis -> (w(0), 0), dodonov_manko -> (w(0), f'(0)), gdm -> engineering
/// formula, custom -> the configured pair.
InvariantSpec resolve_invariant(const RunConfig& cfg, const LsodeSystem& sys);

/// Transformation to the auxiliary system: the engineered b = sqrt(W) map for
/// invariant.kind = gdm, the harmonic-target map with the resolved (w~, g~)
/// otherwise.
AeptMap make_map(const RunConfig& cfg, const LsodeSystem& sys,
                 const ClassicalBasis& basis);

PhysicalConstants make_constants(const RunConfig& cfg);
Grid make_grid(const RunConfig& cfg);

}  // namespace qaept::cli
