// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 10 exercises the CLI binary whose path is argv[1].

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "qaept/arnold.hpp"
#include "qaept/invariants.hpp"
#include "qaept/lsode.hpp"
#include "qaept/propagator.hpp"
#include "qaept/quantum.hpp"

using namespace qaept;
using cplx = std::complex<double>;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

void criterion(int index, const std::string& name,
               const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [pass, detail] = body();
    report(index, name, pass, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

WaveFunction seeded_gaussian(const Grid& grid, PhysicalConstants pc,
                             std::mt19937& rng) {
  std::uniform_real_distribution<double> ux(-1.2, 1.2), uk(-1.5, 1.5),
      us(0.8, 1.2);
  const double x0 = ux(rng), k0 = uk(rng), sigma = us(rng);
  WaveFunction psi(grid, 0.0, pc);
  for (int i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    psi[i] = std::exp(-(x - x0) * (x - x0) / (4.0 * sigma * sigma)) *
             std::polar(1.0, k0 * x);
  }
  psi.normalize();
  return psi;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const double gamma = 0.4, omega = 1.0;
  const double om = std::sqrt(omega * omega - 0.25 * gamma * gamma);  // sqrt(0.96)
  const Grid grid(-12.0, 12.0, 512);
  const PhysicalConstants pc;
  const auto ck_sys = LsodeSystem::caldirola_kanai(gamma, omega);
  const auto ck_basis = closed_form_ck(gamma, omega);
  const auto dm = InvariantSpec::dodonov_manko(gamma, omega);

  // 1. CK eigenstate exactness under the Crank-Nicolson oracle.
  criterion(1, "CK eigenstate exactness", [&]() -> std::pair<bool, std::string> {
    double worst = 1.0;
    for (int n = 0; n <= 2; ++n) {
      auto psi0 = ck_eigenstate(n, gamma, omega, 0.0, grid, pc);
      PropagationConfig cfg;
      cfg.dt = 1e-3;
      cfg.t_final = 5.0;
      cfg.store_every = 5000;
      auto traj = propagate(psi0, ck_sys, pc, cfg);
      const double f =
          fidelity(traj.states.back(), ck_eigenstate(n, gamma, omega, 5.0, grid, pc));
      worst = std::min(worst, f);
    }
    return {worst >= 0.9999, fmt("min fidelity %.8f >= 0.9999", worst)};
  });

  // 2. Dodonov-Man'ko spectrum, identical across times.
  criterion(2, "Dodonov-Man'ko spectrum", [&]() -> std::pair<bool, std::string> {
    std::vector<std::vector<double>> spectra;
    double worst_abs = 0.0, worst_cross = 0.0;
    for (double t : {0.0, 1.0, 2.0}) {
      auto I = build_invariant(dm, ck_basis, grid, pc, t);
      spectra.push_back(lowest_eigenvalues(I, 5));
      for (int n = 0; n < 5; ++n)
        worst_abs = std::max(worst_abs,
                             std::abs(spectra.back()[n] - om * (n + 0.5)));
    }
    for (int n = 0; n < 5; ++n)
      for (size_t a = 1; a < spectra.size(); ++a)
        worst_cross = std::max(worst_cross, std::abs(spectra[a][n] - spectra[0][n]));
    return {worst_abs <= 1e-3 && worst_cross <= 1e-4,
            fmt("max |eig - hbar Omega (n+1/2)| %.2e <= 1e-3, cross-time %.2e <= 1e-4",
                worst_abs, worst_cross)};
  });

  // 3. Invariant expectation drift under evolution: CK with I_DM and the
  // Hermite oscillator with its engineered-invariant coefficients.
  criterion(3, "invariance under evolution", [&]() -> std::pair<bool, std::string> {
    std::mt19937 rng(12345);
    double worst = 0.0;

    {
      auto psi = seeded_gaussian(grid, pc, rng);
      PropagationConfig cfg;
      cfg.dt = 1e-3;
      cfg.t_final = 5.0;
      cfg.store_every = 250;
      auto traj = propagate(psi, ck_sys, pc, cfg);
      const double I0 =
          expectation(build_invariant(dm, ck_basis, grid, pc, 0.0), psi).real();
      for (size_t k = 1; k < traj.states.size(); ++k) {
        const double I = expectation(build_invariant(dm, ck_basis, grid, pc,
                                                     traj.times[k]),
                                     traj.states[k])
                             .real();
        worst = std::max(worst, std::abs(I - I0) / std::abs(I0));
      }
    }

    {
      const double alpha = 0.25;
      auto h_sys = LsodeSystem::hermite(alpha, omega);
      auto h_basis = closed_form_hermite(alpha, omega);
      // I_GDM coefficients for the Hermite oscillator: w~^2 = w^2 - alpha.
      const InvariantSpec gdm{std::sqrt(omega * omega - alpha), 0.0};
      // The Hermite packet narrows by e^{-alpha T^2/4} ~ 0.21 by T = 5, so
      // this limb runs on a proportionally finer grid.
      const Grid fine(-12.0, 12.0, 1536);
      auto psi = seeded_gaussian(fine, pc, rng);
      PropagationConfig cfg;
      cfg.dt = 1e-3;
      cfg.t_final = 5.0;
      cfg.store_every = 250;
      auto traj = propagate(psi, h_sys, pc, cfg);
      const double I0 =
          expectation(build_invariant(gdm, h_basis, fine, pc, 0.0), psi).real();
      for (size_t k = 1; k < traj.states.size(); ++k) {
        const double I = expectation(build_invariant(gdm, h_basis, fine, pc,
                                                     traj.times[k]),
                                     traj.states[k])
                             .real();
        worst = std::max(worst, std::abs(I - I0) / std::abs(I0));
      }
    }
    return {worst <= 1e-4, fmt("max relative drift %.2e <= 1e-4", worst)};
  });

  // 4. Matrix identity I_DM = H_CK + (gamma/2) sym(x p).
  criterion(4, "matrix identity", [&]() -> std::pair<bool, std::string> {
    auto X0 = conserved_position(ck_basis, grid, pc, 0.0);
    auto P0 = conserved_momentum(ck_basis, grid, pc, 0.0);
    Eigen::MatrixXcd sym_xp = 0.5 * (X0.mat * P0.mat + P0.mat * X0.mat);
    double worst = 0.0;
    for (double t : {0.0, 0.7, 2.3}) {
      auto I = build_invariant(dm, ck_basis, grid, pc, t);
      auto H = build_gck_hamiltonian(ck_sys, grid, pc, t);
      worst = std::max(
          worst, (I.mat - H.mat - 0.5 * gamma * sym_xp).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-8, fmt("max-norm defect %.2e <= 1e-8", worst)};
  });

  // 5. Classical cross-checks: closed forms, Wronskian, zero counts.
  criterion(5, "classical cross-checks", [&]() -> std::pair<bool, std::string> {
    std::vector<double> t_grid;
    for (int i = 0; i <= 400; ++i) t_grid.push_back(10.0 * i / 400.0);

    double worst_dev = 0.0, worst_w = 0.0;
    {
      auto numeric = integrate_classical(ck_sys, t_grid);
      for (double t : t_grid) {
        worst_dev = std::max(worst_dev, std::abs(numeric.u1(t) - ck_basis.u1(t)));
        worst_dev = std::max(worst_dev, std::abs(numeric.u2(t) - ck_basis.u2(t)));
        worst_w = std::max(worst_w, std::abs(numeric.wronskian(t) -
                                             ck_sys.wronskian_of(t)));
      }
    }
    {
      auto h_sys = LsodeSystem::hermite(0.25, omega);
      auto closed = closed_form_hermite(0.25, omega);
      auto numeric = integrate_classical(h_sys, t_grid);
      for (double t : t_grid) {
        worst_dev = std::max(worst_dev, std::abs(numeric.u1(t) - closed.u1(t)));
        worst_dev = std::max(worst_dev, std::abs(numeric.u2(t) - closed.u2(t)));
        worst_w = std::max(worst_w, std::abs(numeric.wronskian(t) -
                                             h_sys.wronskian_of(t)));
      }
    }

    bool zeros_ok = true;
    for (auto [alpha, w] :
         std::vector<std::pair<double, double>>{{0.1, 1.0}, {0.3, 1.0}}) {
      auto b = closed_form_hermite(alpha, w);
      const int expect_u2 =
          2 * static_cast<int>(std::ceil((w * w - alpha) / (2 * alpha)));
      const int expect_u1 =
          2 * static_cast<int>(std::ceil((w * w - 2 * alpha) / (2 * alpha))) + 1;
      zeros_ok = zeros_ok &&
                 count_zeros([&](double t) { return b.u2(t); }, -40.0, 40.0,
                             16001) == expect_u2 &&
                 count_zeros([&](double t) { return b.u1(t); }, -40.0, 40.0,
                             16001) == expect_u1;
    }
    const bool pass = worst_dev <= 1e-6 && worst_w <= 1e-8 && zeros_ok;
    return {pass, fmt("max closed-form deviation %.2e <= 1e-6, Wronskian %.2e "
                      "<= 1e-8, zero counts match",
                      worst_dev, worst_w)};
  });

  // 6. Generalized Ermakov residuals.
  criterion(6, "generalized Ermakov residuals", [&]() -> std::pair<bool, std::string> {
    double worst = 0.0;
    auto b_ck = b_from_basis(ck_basis, 1.0);
    auto aux1 = LsodeSystem::harmonic(1.0);
    for (double t = 0.0; t <= 10.0; t += 0.1)
      worst = std::max(worst, std::abs(ermakov_residual(b_ck, ck_sys, aux1, t)));

    auto eng_ck = engineer_b_from_wronskian(ck_sys);
    for (double t = 0.0; t <= 10.0; t += 0.1)
      worst = std::max(worst, std::abs(ermakov_residual(eng_ck.b, ck_sys,
                                                        eng_ck.auxiliary, t)));

    auto h_sys = LsodeSystem::hermite(0.25, omega);
    auto eng_h = engineer_b_from_wronskian(h_sys);
    for (double t = 0.0; t <= 10.0; t += 0.1)
      worst = std::max(worst, std::abs(ermakov_residual(eng_h.b, h_sys,
                                                        eng_h.auxiliary, t)));
    return {worst <= 1e-6, fmt("max |residual| %.2e <= 1e-6", worst)};
  });

  // 7. QAEPT unitarity, round trips, self-map identity.
  criterion(7, "QAEPT unitarity and round trips", [&]() -> std::pair<bool, std::string> {
    std::vector<AeptMap> maps;
    maps.push_back(AeptMap::to_harmonic(ck_basis, omega, gamma));
    maps.push_back(AeptMap::to_harmonic(closed_form_hermite(0.25, omega), 1.0, 0.0));
    maps.push_back(AeptMap::to_harmonic(
        integrate_classical(lane_emden_system(0.3, 0.2, 1.0),
                            {0.0, 0.5, 1.0, 1.5, 2.0}),
        1.0, 0.3));

    // Wide enough that the rescaled pullback keeps the state tails below the
    // round-trip tolerance.
    const Grid map_grid(-16.0, 16.0, 1024);
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> ut(0.0, 1.2);
    double worst_norm = 0.0, worst_rt = 0.0;
    int states = 0;
    for (auto& map : maps) {
      for (int trial = 0; trial < 17 && states < 51; ++trial, ++states) {
        auto psi = seeded_gaussian(map_grid, pc, rng);
        psi.set_t(ut(rng));
        auto phi = qaept_apply(psi, map);
        worst_norm = std::max(worst_norm, std::abs(phi.norm() - 1.0));
        auto back = qaept_inverse(phi, map);
        for (int i = 0; i < map_grid.n(); ++i)
          worst_rt = std::max(worst_rt, std::abs(back[i] - psi[i]));
      }
    }

    // Self-map: a system composed with itself is the identity.
    auto self_map = compose_aept(closed_form_harmonic(1.0), closed_form_harmonic(1.0));
    std::mt19937 rng2(11);
    auto psi = seeded_gaussian(grid, pc, rng2);
    psi.set_t(0.7);
    auto mapped = qaept_apply(psi, self_map);
    double worst_self = std::abs(mapped.t() - psi.t());
    for (int i = 0; i < grid.n(); ++i)
      worst_self = std::max(worst_self, std::abs(mapped[i] - psi[i]));

    const bool pass = worst_norm <= 1e-9 && worst_rt <= 1e-9 && worst_self <= 1e-12;
    return {pass, fmt("norm defect %.2e <= 1e-9, round trip %.2e <= 1e-9, "
                      "self-map to 1e-12",
                      worst_norm, worst_rt)};
  });

  // 8. Global time map: unwrapped arctan vs quadrature, strictly increasing.
  criterion(8, "global time map", [&]() -> std::pair<bool, std::string> {
    const double w0 = 1.0;
    auto b = b_from_basis(ck_basis, w0);
    auto integrand = [&](double s) {
      const double bs = b.value(s);
      return ck_sys.wronskian_of(s) / (bs * bs);
    };
    // Composite Simpson as the independent quadrature oracle.
    auto quad = [&](double t_end) {
      const int steps = 80000;
      double s = 0.0;
      const double h = t_end / steps;
      for (int i = 0; i < steps; ++i) {
        const double x = i * h;
        s += h / 6.0 *
             (integrand(x) + 4.0 * integrand(x + 0.5 * h) + integrand(x + h));
      }
      return s;
    };

    const int zeros = count_zeros([&](double t) { return ck_basis.u2(t); }, 0.0,
                                  10.0, 8001);
    double worst = 0.0;
    for (double t : {1.0, 2.5, 4.0, 5.5, 7.0, 8.5, 10.0})
      worst = std::max(worst,
                       std::abs(time_map_arctan(ck_basis, w0, t) - quad(t)));

    bool increasing = true;
    double prev = time_map_arctan(ck_basis, w0, 0.0);
    for (double t = 0.02; t <= 10.0; t += 0.02) {
      const double cur = time_map_arctan(ck_basis, w0, t);
      increasing = increasing && cur > prev;
      prev = cur;
    }
    const bool pass = worst <= 1e-8 && increasing && zeros >= 2;
    return {pass, fmt("max |arctan - quadrature| %.2e <= 1e-8, strictly "
                      "increasing across %g focal points",
                      worst, static_cast<double>(zeros))};
  });

  // 9. Oracle quality gates: unitarity, convergence order, free Gaussian.
  criterion(9, "oracle quality gates", [&]() -> std::pair<bool, std::string> {
    // Norm drift over 1e4 steps.
    WaveFunction psi(grid, 0.0, pc);
    for (int i = 0; i < grid.n(); ++i) {
      const double x = grid.x(i);
      psi[i] = std::exp(-0.25 * (x - 0.5) * (x - 0.5));
    }
    psi.normalize();
    WaveFunction cur = psi;
    const double dt = 5e-4;
    for (int k = 0; k < 10000; ++k)
      cur = crank_nicolson_step(cur, ck_sys, pc, k * dt, dt);
    const double drift = std::abs(cur.norm() - 1.0);

    // Convergence order: err(dt) vs a dt/4 reference, halving dt.
    auto run = [&](double step) {
      WaveFunction w = psi;
      const long steps = std::lround(0.5 / step);
      for (long k = 0; k < steps; ++k)
        w = crank_nicolson_step(w, ck_sys, pc, k * step, step);
      return w;
    };
    auto l2diff = [&](const WaveFunction& a, const WaveFunction& b) {
      double s = 0.0;
      for (int i = 0; i < grid.n(); ++i) s += std::norm(a[i] - b[i]);
      return std::sqrt(s * grid.dx());
    };
    const double base = 4e-3;
    const double e1 = l2diff(run(base), run(base / 4));
    const double e2 = l2diff(run(base / 2), run(base / 8));
    const double factor = e1 / e2;

    // Free-particle Gaussian vs the closed-form spreading solution.
    auto analytic = [&](double t) {
      WaveFunction w(grid, t, pc);
      const cplx lambda(1.0, pc.hbar * t / (2.0 * pc.m));
      const double center = -1.0 + pc.hbar * t / pc.m;  // x0 + hbar k0 t/m
      for (int i = 0; i < grid.n(); ++i) {
        const double x = grid.x(i);
        w[i] = std::exp(-(x - center) * (x - center) / (4.0 * lambda)) /
               std::sqrt(lambda) *
               std::polar(1.0, 1.0 * x - pc.hbar * t / (2.0 * pc.m));
      }
      w.normalize();
      return w;
    };
    PropagationConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 1.0;
    cfg.store_every = 1000;
    auto traj = propagate(analytic(0.0), LsodeSystem::free_particle(), pc, cfg);
    const double f = fidelity(traj.states.back(), analytic(1.0));

    const bool pass = drift <= 1e-9 && factor >= 3.5 && factor <= 4.5 &&
                      f >= 1.0 - 1e-6;
    return {pass, fmt("norm drift %.2e <= 1e-9, order factor %.2f in [3.5, 4.5], "
                      "free-Gaussian fidelity ok",
                      drift, factor)};
  });

  // 10. Negative control through the CLI: a 32-point grid fails verify.
  criterion(10, "negative control (CLI verify, exit 1)",
            [&]() -> std::pair<bool, std::string> {
    if (cli.empty()) return {false, "CLI binary path not provided"};
    namespace fs = std::filesystem;
    const fs::path work = fs::temp_directory_path() / "qaept_acceptance";
    fs::create_directories(work);
    const fs::path conf = work / "coarse.conf";
    {
      std::ofstream os(conf);
      os << "system.kind = caldirola_kanai\n"
            "system.gamma = 0.4\n"
            "system.omega = 1.0\n"
            "grid.n = 32\n"
            "time.t_final = 5.0\n"
            "time.dt = 0.001\n"
            "invariant.kind = dodonov_manko\n"
            "outputs.dir = "
         << (work / "out").string() << "\n";
    }
    const std::string cmd =
        cli + " verify --config " + conf.string() + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return {code == 1, fmt("exit code %g (expected 1)", static_cast<double>(code))};
  });

  if (failures == 0)
    std::printf("acceptance: all %d criteria passed\n", 10);
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
