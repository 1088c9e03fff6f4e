#include "qaept/invariants.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "qaept/specfun.hpp"

namespace qaept {

using cplx = std::complex<double>;

namespace {

// 4th-order central stencils, Dirichlet boundaries (rows clipped).
Eigen::MatrixXd first_derivative_matrix(const Grid& g) {
  const int n = g.n();
  const double h = g.dx();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  const double c1 = 8.0 / (12.0 * h), c2 = -1.0 / (12.0 * h);
  for (int i = 0; i < n; ++i) {
    if (i - 2 >= 0) d(i, i - 2) = -c2;
    if (i - 1 >= 0) d(i, i - 1) = -c1;
    if (i + 1 < n) d(i, i + 1) = c1;
    if (i + 2 < n) d(i, i + 2) = c2;
  }
  return d;
}

Eigen::MatrixXd laplacian_matrix(const Grid& g) {
  const int n = g.n();
  const double h2 = g.dx() * g.dx();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  const double c0 = -30.0 / (12.0 * h2), c1 = 16.0 / (12.0 * h2),
               c2 = -1.0 / (12.0 * h2);
  for (int i = 0; i < n; ++i) {
    l(i, i) = c0;
    if (i - 2 >= 0) l(i, i - 2) = c2;
    if (i - 1 >= 0) l(i, i - 1) = c1;
    if (i + 1 < n) l(i, i + 1) = c1;
    if (i + 2 < n) l(i, i + 2) = c2;
  }
  return l;
}

Eigen::VectorXd position_vector(const Grid& g) {
  Eigen::VectorXd x(g.n());
  for (int i = 0; i < g.n(); ++i) x(i) = g.x(i);
  return x;
}

// x D + D x as a real antisymmetric matrix.
Eigen::MatrixXd sym_xd_matrix(const Grid& g) {
  Eigen::MatrixXd d = first_derivative_matrix(g);
  Eigen::VectorXd x = position_vector(g);
  return x.asDiagonal() * d + d * x.asDiagonal();
}

}  // namespace

double OperatorMatrix::hermiticity_defect() const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix build_gck_hamiltonian(const LsodeSystem& sys, const Grid& grid,
                                     PhysicalConstants consts, double t) {
  const double W = sys.wronskian_of(t);
  const double ef = 1.0 / W;
  const double w2 = sys.omega_sq(t);
  const double lam = sys.lambda(t);

  OperatorMatrix H;
  H.t = t;
  H.hermitian = true;
  H.mat = (-consts.hbar * consts.hbar / (2.0 * consts.m) * W) *
          laplacian_matrix(grid).cast<cplx>();
  for (int i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    H.mat(i, i) += ef * (0.5 * consts.m * w2 * x * x - consts.m * lam * x);
  }
  return H;
}

OperatorMatrix conserved_position(const ClassicalBasis& basis, const Grid& grid,
                                  PhysicalConstants consts, double t) {
  const double W = basis.system().wronskian_of(t);
  const double a = basis.du1(t) / W;
  const cplx b(0.0, consts.hbar / consts.m * basis.u1(t));

  OperatorMatrix X;
  X.t = t;
  X.hermitian = true;
  X.mat = b * first_derivative_matrix(grid).cast<cplx>();
  for (int i = 0; i < grid.n(); ++i) X.mat(i, i) += a * grid.x(i);
  return X;
}

OperatorMatrix conserved_momentum(const ClassicalBasis& basis, const Grid& grid,
                                  PhysicalConstants consts, double t) {
  const double W = basis.system().wronskian_of(t);
  const cplx d(0.0, -consts.hbar * basis.u2(t));
  const double e = -consts.m * basis.du2(t) / W;

  OperatorMatrix P;
  P.t = t;
  P.hermitian = true;
  P.mat = d * first_derivative_matrix(grid).cast<cplx>();
  for (int i = 0; i < grid.n(); ++i) P.mat(i, i) += e * grid.x(i);
  return P;
}

OperatorMatrix build_invariant(const InvariantSpec& spec,
                               const ClassicalBasis& basis, const Grid& grid,
                               PhysicalConstants consts, double t) {
  const double W = basis.system().wronskian_of(t);
  const double u1 = basis.u1(t), du1 = basis.du1(t);
  const double u2 = basis.u2(t), du2 = basis.du2(t);
  const double wt2 = spec.omega_tilde * spec.omega_tilde;
  const double gt = spec.gamma_tilde;
  const double hbar = consts.hbar, m = consts.m;

  // Expansion of P^2/2m + (1/2) m w~^2 X^2 + (g~/2) sym(XP) in (L, xD+Dx, x^2);
  // the squares of the derivative terms are expressed through the shared
  // Laplacian so the kinetic matrix matches build_gck_hamiltonian's exactly.
  const double c_lap = -hbar * hbar / (2.0 * m) * (u2 * u2 - gt * u1 * u2 + wt2 * u1 * u1);
  const cplx c_sym(0.0, hbar / (2.0 * W) *
                            (u2 * du2 + wt2 * u1 * du1 -
                             0.5 * gt * (du1 * u2 + u1 * du2)));
  const double c_x2 =
      m / (2.0 * W * W) * (du2 * du2 - gt * du1 * du2 + wt2 * du1 * du1);

  OperatorMatrix I;
  I.t = t;
  I.hermitian = true;
  I.mat = c_lap * laplacian_matrix(grid).cast<cplx>() +
          c_sym * sym_xd_matrix(grid).cast<cplx>();
  for (int i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    I.mat(i, i) += c_x2 * x * x;
  }
  return I;
}

InvariantSpec gdm_from_engineering(const LsodeSystem& sys) {
  const double wt2 = sys.omega_sq(0.0) - 0.5 * sys.fddot(0.0);
  if (wt2 < 0.0)
    throw ValidationError(
        "gdm_from_engineering: w2(0)^2 - f''(0)/2 is negative");
  return {std::sqrt(wt2), sys.fdot(0.0)};
}

double invariance_residual(const InvariantSpec& spec, const ClassicalBasis& basis,
                           const LsodeSystem& sys, const Grid& grid,
                           PhysicalConstants consts, double t, double dt) {
  const auto H = build_gck_hamiltonian(sys, grid, consts, t);
  const auto Ip = build_invariant(spec, basis, grid, consts, t + dt);
  const auto Im = build_invariant(spec, basis, grid, consts, t - dt);
  const auto I0 = build_invariant(spec, basis, grid, consts, t);

  // Smooth normalized probes: the lowest Hermite-Gaussian profiles at the
  // invariant's own width scale. The residual operator is applied to each and
  // the max interior amplitude reported.
  const double wref = spec.discrete() ? std::sqrt(spec.omega_cap_sq())
                                      : std::max(1.0, std::abs(spec.omega_tilde));
  const double xi_scale = std::sqrt(consts.m * wref / consts.hbar) / 1.5;

  const int n = grid.n();
  const int margin = 8;
  double worst = 0.0;
  for (int k = 0; k <= 3; ++k) {
    Eigen::VectorXcd psi(n);
    for (int i = 0; i < n; ++i) {
      const double xi = xi_scale * grid.x(i);
      psi(i) = specfun::hermite_poly(k, xi) * std::exp(-0.5 * xi * xi);
    }
    psi /= std::sqrt(grid.dx()) * psi.norm();

    const Eigen::VectorXcd dI_psi = (Ip.mat * psi - Im.mat * psi) / (2.0 * dt);
    const Eigen::VectorXcd comm_psi = H.mat * (I0.mat * psi) - I0.mat * (H.mat * psi);
    const Eigen::VectorXcd r =
        dI_psi + cplx(0.0, 1.0 / consts.hbar) * comm_psi;
    for (int i = margin; i < n - margin; ++i)
      worst = std::max(worst, std::abs(r(i)));
  }
  return worst;
}

std::complex<double> expectation(const OperatorMatrix& op, const WaveFunction& psi) {
  const int n = psi.grid().n();
  if (op.mat.rows() != n || op.mat.cols() != n)
    throw GridMismatch("expectation: operator and state sizes differ");
  Eigen::Map<const Eigen::VectorXcd> v(psi.samples().data(), n);
  Eigen::VectorXcd ov = op.mat * v;
  cplx s(0.0, 0.0);
  for (int i = 0; i < n; ++i) s += std::conj(v(i)) * ov(i);
  s -= 0.5 * (std::conj(v(0)) * ov(0) + std::conj(v(n - 1)) * ov(n - 1));
  return s * psi.grid().dx();
}

std::vector<double> lowest_eigenvalues(const OperatorMatrix& op, int k) {
  Eigen::MatrixXcd sym = 0.5 * (op.mat + op.mat.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericError("lowest_eigenvalues: eigensolver failed");
  std::vector<double> out;
  const int n = std::min<int>(k, solver.eigenvalues().size());
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

void write_spectrum_json(const std::string& system_name, const InvariantSpec& spec,
                         double t, const std::vector<double>& eigenvalues,
                         const std::filesystem::path& path) {
  nlohmann::json j;
  j["system"] = system_name;
  j["spec"] = {{"omega_tilde", spec.omega_tilde},
               {"gamma_tilde", spec.gamma_tilde},
               {"omega_cap_sq", spec.omega_cap_sq()},
               {"discrete", spec.discrete()}};
  j["t"] = t;
  j["eigenvalues"] = eigenvalues;
  std::ofstream os(path);
  if (!os)
    throw ValidationError("write_spectrum_json: cannot open " + path.string());
  os << j.dump(2) << "\n";
}

}  // namespace qaept
