#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "qaept/errors.hpp"

namespace qaept {

struct PhysicalConstants {
  double hbar = 1.0;
  double m = 1.0;
};

/// Uniform position grid with n points from x_min to x_max inclusive.
class Grid {
 public:
  Grid(double x_min, double x_max, int n);
  static Grid symmetric(double half_width, int n) {
    return Grid(-half_width, half_width, n);
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n() const { return n_; }
  double dx() const { return dx_; }
  double x(int i) const { return x_min_ + dx_ * i; }
  bool same_as(const Grid& other) const;

 private:
  double x_min_, x_max_, dx_;
  int n_;
};

/// Complex wavefunction samples on a grid, stamped with a time instant.
class WaveFunction {
 public:
  WaveFunction(Grid grid, double t, PhysicalConstants consts);

  const Grid& grid() const { return grid_; }
  double t() const { return t_; }
  void set_t(double t) { t_ = t; }
  const PhysicalConstants& consts() const { return consts_; }

  std::complex<double>& operator[](int i) { return psi_[i]; }
  const std::complex<double>& operator[](int i) const { return psi_[i]; }
  const std::vector<std::complex<double>>& samples() const { return psi_; }
  std::vector<std::complex<double>>& samples() { return psi_; }

  /// Trapezoidal L2 norm.
  double norm() const;
  void normalize();

  /// max(|psi|) over the two grid edges: the confinement monitor.
  double boundary_amplitude() const;

 private:
  Grid grid_;
  std::vector<std::complex<double>> psi_;
  double t_;
  PhysicalConstants consts_;
};

/// Trapezoidal inner product <a|b> (no renormalization).
std::complex<double> inner_product(const WaveFunction& a, const WaveFunction& b);

/// Band-limited (Whittaker) interpolation of the samples at an arbitrary x;
/// returns 0 outside the grid support.
std::complex<double> interpolate(const WaveFunction& psi, double x);

/// CSV export: columns x, Re psi, Im psi, |psi|^2 (17 significant digits).
void write_csv(const WaveFunction& psi, std::ostream& os);
void write_csv(const WaveFunction& psi, const std::filesystem::path& path);

/// Binary dump: little-endian int64 n, then f64 x_min, x_max, t, hbar, m,
/// then n interleaved Re/Im f64 samples.
void write_binary(const WaveFunction& psi, const std::filesystem::path& path);
WaveFunction read_binary(const std::filesystem::path& path);

}  // namespace qaept
