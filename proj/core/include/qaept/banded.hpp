#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qaept/errors.hpp"

namespace qaept {

/// LU factorization of a complex band matrix with m1 sub- and m2
/// super-diagonals, partial pivoting. Entries are set by diagonal offset,
/// factored once and solved against many right-hand sides.
class BandedLU {
 public:
  BandedLU(int n, int m1, int m2);

  /// Entry A(i, i + offset), offset in [-m1, m2]; valid before factor().
  std::complex<double>& at(int i, int offset);

  void factor();
  void solve(std::span<std::complex<double>> rhs) const;

  int size() const { return n_; }

 private:
  int n_, m1_, m2_, mm_;
  std::vector<std::complex<double>> a_;   // n x mm compact band, row-major
  std::vector<std::complex<double>> al_;  // n x m1 multipliers
  std::vector<int> pivot_;
  bool factored_ = false;
};

}  // namespace qaept
