#include "qaept/wavefunction.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace qaept {

using cplx = std::complex<double>;

Grid::Grid(double x_min, double x_max, int n)
    : x_min_(x_min), x_max_(x_max), n_(n) {
  if (!(x_min < x_max)) throw ValidationError("Grid: x_min must be < x_max");
  if (n < 16) throw ValidationError("Grid: need at least 16 points");
  dx_ = (x_max - x_min) / (n - 1);
}

bool Grid::same_as(const Grid& other) const {
  return n_ == other.n_ && x_min_ == other.x_min_ && x_max_ == other.x_max_;
}

WaveFunction::WaveFunction(Grid grid, double t, PhysicalConstants consts)
    : grid_(grid), psi_(grid.n(), cplx(0.0, 0.0)), t_(t), consts_(consts) {
  if (consts.hbar <= 0.0 || consts.m <= 0.0)
    throw ValidationError("WaveFunction: hbar and m must be positive");
}

double WaveFunction::norm() const {
  double s = 0.0;
  for (const auto& v : psi_) s += std::norm(v);
  s -= 0.5 * (std::norm(psi_.front()) + std::norm(psi_.back()));
  return std::sqrt(s * grid_.dx());
}

void WaveFunction::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw ValidationError("WaveFunction::normalize: zero state");
  for (auto& v : psi_) v /= nrm;
}

double WaveFunction::boundary_amplitude() const {
  return std::max(std::abs(psi_.front()), std::abs(psi_.back()));
}

std::complex<double> inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!a.grid().same_as(b.grid()))
    throw GridMismatch("inner_product: grids differ");
  cplx s(0.0, 0.0);
  const int n = a.grid().n();
  for (int i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
  s -= 0.5 * (std::conj(a[0]) * b[0] + std::conj(a[n - 1]) * b[n - 1]);
  return s * a.grid().dx();
}

std::complex<double> interpolate(const WaveFunction& psi, double x) {
  const Grid& g = psi.grid();
  if (x < g.x_min() || x > g.x_max()) return cplx(0.0, 0.0);
  const double u = (x - g.x_min()) / g.dx();
  const int n = g.n();

  // Whittaker cardinal series: sin(pi u)/pi * sum_j (-1)^j psi_j / (u - j).
  // Band-limited reconstruction; wavefunctions resolved on the grid are far
  // below the Nyquist wavenumber, so the error is set by the boundary tails.
  // sin(pi u) is reduced through the *nearest* node: r = u - near is an exact
  // subtraction with |r| <= 1/2, so sin(pi r) never suffers the cancellation
  // that the direct argument pi*u (or a [0,1) fractional part) would.
  const int near = static_cast<int>(std::lround(u));
  const double r = u - near;
  if (std::abs(r) < 1e-14) return psi[near];
  const double s = (near % 2 == 0 ? 1.0 : -1.0) * std::sin(M_PI * r);
  cplx acc(0.0, 0.0);
  double sign = 1.0;
  for (int j = 0; j < n; ++j) {
    acc += sign * psi[j] / (u - j);
    sign = -sign;
  }
  return acc * (s / M_PI);
}

void write_csv(const WaveFunction& psi, std::ostream& os) {
  os << "x,re_psi,im_psi,abs2_psi\n";
  char buf[160];
  for (int i = 0; i < psi.grid().n(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", psi.grid().x(i),
                  psi[i].real(), psi[i].imag(), std::norm(psi[i]));
    os << buf;
  }
}

void write_csv(const WaveFunction& psi, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("write_csv: cannot open " + path.string());
  write_csv(psi, os);
}

namespace {

void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

double get_f64(std::istream& is) {
  double v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_binary(const WaveFunction& psi, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("write_binary: cannot open " + path.string());
  const std::int64_t n = psi.grid().n();
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  put_f64(os, psi.grid().x_min());
  put_f64(os, psi.grid().x_max());
  put_f64(os, psi.t());
  put_f64(os, psi.consts().hbar);
  put_f64(os, psi.consts().m);
  for (int i = 0; i < psi.grid().n(); ++i) {
    put_f64(os, psi[i].real());
    put_f64(os, psi[i].imag());
  }
}

WaveFunction read_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("read_binary: cannot open " + path.string());
  std::int64_t n = 0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!is || n < 16 || n > (1 << 26))
    throw ValidationError("read_binary: corrupt header in " + path.string());
  const double x_min = get_f64(is);
  const double x_max = get_f64(is);
  const double t = get_f64(is);
  PhysicalConstants consts{get_f64(is), get_f64(is)};
  WaveFunction psi(Grid(x_min, x_max, static_cast<int>(n)), t, consts);
  for (int i = 0; i < n; ++i) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    psi[i] = cplx(re, im);
  }
  if (!is) throw ValidationError("read_binary: truncated file " + path.string());
  return psi;
}

}  // namespace qaept
