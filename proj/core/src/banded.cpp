#include "qaept/banded.hpp"

#include <algorithm>
#include <cmath>

namespace qaept {

using cplx = std::complex<double>;

BandedLU::BandedLU(int n, int m1, int m2)
    : n_(n), m1_(m1), m2_(m2), mm_(m1 + m2 + 1) {
  if (n < 1 || m1 < 0 || m2 < 0) throw ValidationError("BandedLU: bad shape");
  a_.assign(static_cast<size_t>(n_) * mm_, cplx(0.0, 0.0));
  al_.assign(static_cast<size_t>(n_) * std::max(m1_, 1), cplx(0.0, 0.0));
  pivot_.assign(n_, 0);
}

cplx& BandedLU::at(int i, int offset) {
  if (factored_) throw ValidationError("BandedLU: matrix already factored");
  if (i < 0 || i >= n_ || offset < -m1_ || offset > m2_ ||
      i + offset < 0 || i + offset >= n_)
    throw ValidationError("BandedLU: entry outside the band");
  return a_[static_cast<size_t>(i) * mm_ + offset + m1_];
}

// Band LU with partial pivoting (row-shifted compact storage).
void BandedLU::factor() {
  if (factored_) return;
  auto a = [&](int i, int j) -> cplx& {
    return a_[static_cast<size_t>(i) * mm_ + j];
  };

  // Shift the top m1 rows left so column 0 is the working diagonal.
  int l = m1_;
  for (int i = 0; i < m1_; ++i) {
    for (int j = m1_ - i; j < mm_; ++j) a(i, j - l) = a(i, j);
    --l;
    for (int j = mm_ - l - 1; j < mm_; ++j) a(i, j) = cplx(0.0, 0.0);
  }

  l = m1_;
  for (int k = 0; k < n_; ++k) {
    cplx pivot = a(k, 0);
    int ip = k;
    if (l < n_) ++l;
    for (int j = k + 1; j < l; ++j)
      if (std::abs(a(j, 0)) > std::abs(pivot)) {
        pivot = a(j, 0);
        ip = j;
      }
    pivot_[k] = ip;
    if (pivot == cplx(0.0, 0.0))
      throw SolveFailure("BandedLU: singular matrix");
    if (ip != k)
      for (int j = 0; j < mm_; ++j) std::swap(a(k, j), a(ip, j));
    for (int i = k + 1; i < l; ++i) {
      const cplx mult = a(i, 0) / a(k, 0);
      al_[static_cast<size_t>(k) * std::max(m1_, 1) + (i - k - 1)] = mult;
      for (int j = 1; j < mm_; ++j) a(i, j - 1) = a(i, j) - mult * a(k, j);
      a(i, mm_ - 1) = cplx(0.0, 0.0);
    }
  }
  factored_ = true;
}

void BandedLU::solve(std::span<cplx> rhs) const {
  if (!factored_) throw ValidationError("BandedLU: factor() before solve()");
  if (static_cast<int>(rhs.size()) != n_)
    throw ValidationError("BandedLU: rhs size mismatch");
  auto a = [&](int i, int j) -> const cplx& {
    return a_[static_cast<size_t>(i) * mm_ + j];
  };

  int l = m1_;
  for (int k = 0; k < n_; ++k) {
    const int ip = pivot_[k];
    if (ip != k) std::swap(rhs[k], rhs[ip]);
    if (l < n_) ++l;
    for (int i = k + 1; i < l; ++i)
      rhs[i] -= al_[static_cast<size_t>(k) * std::max(m1_, 1) + (i - k - 1)] * rhs[k];
  }
  l = 1;
  for (int i = n_ - 1; i >= 0; --i) {
    cplx sum = rhs[i];
    for (int k = 1; k < l; ++k) sum -= a(i, k) * rhs[k + i];
    rhs[i] = sum / a(i, 0);
    if (l < mm_) ++l;
  }
}

}  // namespace qaept
