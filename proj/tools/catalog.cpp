#include "catalog.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace qaept::cli {

namespace {

// Tabulated coefficient curve: cubic Hermite interpolation with
// finite-difference slopes, plus the exact integral of the interpolant.
class Table {
 public:
  Table(std::vector<double> t, std::vector<double> v)
      : t_(std::move(t)), v_(std::move(v)) {
    const size_t n = t_.size();
    slopes_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      if (i == 0)
        slopes_[i] = (v_[1] - v_[0]) / (t_[1] - t_[0]);
      else if (i + 1 == n)
        slopes_[i] = (v_[n - 1] - v_[n - 2]) / (t_[n - 1] - t_[n - 2]);
      else
        slopes_[i] = (v_[i + 1] - v_[i - 1]) / (t_[i + 1] - t_[i - 1]);
    }
    // Cumulative integral from t_[0], one closed form per segment.
    integral_.assign(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i)
      integral_[i + 1] = integral_[i] + segment_integral(i, t_[i + 1]);
  }

  double value(double t) const {
    const size_t i = segment(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v_[i] + (s3 - 2 * s2 + s) * h * slopes_[i] +
           (-2 * s3 + 3 * s2) * v_[i + 1] + (s3 - s2) * h * slopes_[i + 1];
  }

  double integral(double t) const {
    const size_t i = segment(t);
    return integral_[i] + segment_integral(i, t);
  }

 private:
  size_t segment(double t) const {
    if (t < t_.front() - 1e-12 || t > t_.back() + 1e-12)
      throw DomainViolation("custom system: t outside the tabulated range");
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    size_t i = it - t_.begin();
    if (i > 0) --i;
    if (i + 1 >= t_.size()) i = t_.size() - 2;
    return i;
  }

  double segment_integral(size_t i, double t_end) const {
    const double h = t_[i + 1] - t_[i];
    const double s = (t_end - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2;
    // Antiderivatives of the Hermite basis polynomials in s, times h.
    const double b00 = 0.5 * s4 - s3 + s;
    const double b10 = 0.25 * s4 - 2.0 / 3.0 * s3 + 0.5 * s2;
    const double b01 = -0.5 * s4 + s3;
    const double b11 = 0.25 * s4 - s3 / 3.0;
    return h * (b00 * v_[i] + b10 * h * slopes_[i] + b01 * v_[i + 1] +
                b11 * h * slopes_[i + 1]);
  }

  std::vector<double> t_, v_, slopes_, integral_;
};

LsodeSystem make_custom_system(const std::string& path, double mass) {
  std::ifstream is(path);
  if (!is) throw ValidationError("custom system: cannot open " + path);
  std::vector<double> t, fdot, w2, lam;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 4)
      throw ValidationError("custom system: line " + std::to_string(line_no) +
                            " needs 4 columns (t, fdot, omega_sq, lambda)");
    t.push_back(row[0]);
    fdot.push_back(row[1]);
    w2.push_back(row[2]);
    lam.push_back(row[3]);
  }
  if (t.size() < 4)
    throw ValidationError("custom system: need at least 4 table rows");
  if (t.front() != 0.0)
    throw ValidationError("custom system: table must start at t = 0");
  for (size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw ValidationError("custom system: table times must increase");

  auto fdot_tab = std::make_shared<Table>(t, fdot);
  auto w2_tab = std::make_shared<Table>(t, w2);
  auto lam_tab = std::make_shared<Table>(t, lam);

  LsodeSystem sys;
  sys.fdot = [fdot_tab](double s) { return fdot_tab->value(s); };
  sys.omega_sq = [w2_tab](double s) { return w2_tab->value(s); };
  sys.lambda = [lam_tab](double s) { return lam_tab->value(s); };
  sys.f = [fdot_tab](double s) { return fdot_tab->integral(s); };
  sys.mass = mass;
  sys.kind = SystemKind::custom;
  return sys;
}

}  // namespace

LsodeSystem make_system(const RunConfig& cfg) {
  const auto& sc = cfg.system;
  if (sc.kind == "free") return LsodeSystem::free_particle(sc.mass);
  if (sc.kind == "harmonic") return LsodeSystem::harmonic(sc.omega, sc.mass);
  if (sc.kind == "caldirola_kanai")
    return LsodeSystem::caldirola_kanai(sc.gamma, sc.omega, sc.mass);
  if (sc.kind == "hermite") return LsodeSystem::hermite(sc.alpha, sc.omega, sc.mass);
  if (sc.kind == "lane_emden")
    return lane_emden_system(sc.mu, sc.nu, sc.omega, sc.mass);
  return make_custom_system(sc.table, sc.mass);
}

ClassicalBasis make_basis(const RunConfig& cfg, const LsodeSystem& sys,
                          double t_max) {
  const auto& sc = cfg.system;
  if (sc.kind == "free") return closed_form_free(sc.mass);
  if (sc.kind == "harmonic") return closed_form_harmonic(sc.omega, sc.mass);
  if (sc.kind == "caldirola_kanai")
    return closed_form_ck(sc.gamma, sc.omega, sc.mass);
  if (sc.kind == "hermite") return closed_form_hermite(sc.alpha, sc.omega, sc.mass);

  const int n = std::max(101, static_cast<int>(t_max * 40) + 1);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = t_max * i / (n - 1);
  return integrate_classical(sys, grid);
}

InvariantSpec resolve_invariant(const RunConfig& cfg, const LsodeSystem& sys) {
  const auto& ic = cfg.invariant;
  if (ic.kind == "lewis") return InvariantSpec::lewis(std::sqrt(sys.omega_sq(0.0)));
  if (ic.kind == "dodonov_manko")
    return InvariantSpec::dodonov_manko(sys.fdot(0.0), std::sqrt(sys.omega_sq(0.0)));
  if (ic.kind == "gdm") return gdm_from_engineering(sys);
  return InvariantSpec{ic.omega_tilde, ic.gamma_tilde};
}

AeptMap make_map(const RunConfig& cfg, const LsodeSystem& sys,
                 const ClassicalBasis& basis) {
  if (cfg.invariant.kind == "gdm") return AeptMap::engineered(sys);
  const auto spec = resolve_invariant(cfg, sys);
  return AeptMap::to_harmonic(basis, spec.omega_tilde, spec.gamma_tilde);
}

PhysicalConstants make_constants(const RunConfig& cfg) {
  return PhysicalConstants{cfg.hbar, cfg.m};
}

Grid make_grid(const RunConfig& cfg) {
  return Grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n);
}

}  // namespace qaept::cli
