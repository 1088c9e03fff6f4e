#include <doctest.h>

#include <cmath>
#include <random>

#include "qaept/specfun.hpp"

using namespace qaept;
using specfun::SeriesControl;

namespace {

// Independent oracle: direct 1F1 power series in long double, fixed 200 terms,
// no Kummer transformation. Only valid where cancellation is mild.
long double kummer_series_oracle(long double a, long double b, long double z) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 0; k < 200; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1);
    sum += term;
  }
  return sum;
}

// Independent oracle: composite Simpson quadrature of (2/sqrt(pi)) e^{t^2}.
double erfi_quadrature_oracle(double x, int n = 20000) {
  double s = 0.0;
  const double h = x / n;
  auto f = [](double t) { return std::exp(t * t); };
  for (int i = 0; i < n; ++i) {
    const double a = i * h;
    s += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
  }
  return 2.0 / std::sqrt(M_PI) * s;
}

}  // namespace

TEST_CASE("hermite_poly base cases and a hand value") {
  CHECK(specfun::hermite_poly(0, 1.7) == 1.0);
  CHECK(specfun::hermite_poly(1, 0.5) == 1.0);
  // H_3(x) = 8x^3 - 12x at x = 2
  CHECK(specfun::hermite_poly(3, 2.0) == doctest::Approx(40.0).epsilon(1e-14));
}

TEST_CASE("hermite recurrence consistency up to n = 20") {
  for (int n = 1; n <= 20; ++n) {
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const double lhs = specfun::hermite_poly(n + 1, x);
      const double rhs =
          2.0 * x * specfun::hermite_poly(n, x) - 2.0 * n * specfun::hermite_poly(n - 1, x);
      const double scale = std::max(1.0, std::abs(lhs));
      CHECK(std::abs(lhs - rhs) / scale < 1e-10);
    }
  }
}

TEST_CASE("kummer_1f1 special values") {
  CHECK(specfun::kummer_1f1(0.3, 0.5, 0.0) == 1.0);
  CHECK(specfun::kummer_1f1(1.0, 1.0, 0.7) ==
        doctest::Approx(2.0137527074704764).epsilon(1e-13));
  // Frozen from the direct-series oracle (also equals sqrt(pi) erf(1) / 2).
  const double expected = 0.7468241328124270;
  CHECK(specfun::kummer_1f1(0.5, 1.5, -1.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(static_cast<double>(kummer_series_oracle(0.5L, 1.5L, -1.0L)) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("kummer transformation identity on random parameters") {
  std::mt19937 rng(20240901);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), ub(0.5, 4.0), uz(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double a = ua(rng), b = ub(rng), z = uz(rng);
    const double lhs = specfun::kummer_1f1(a, b, z);
    const double rhs = std::exp(z) * specfun::kummer_1f1(b - a, b, -z);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("kummer_1f1 error paths") {
  CHECK_THROWS_AS(specfun::kummer_1f1(0.5, 0.0, 1.0), PoleParameter);
  CHECK_THROWS_AS(specfun::kummer_1f1(0.5, -2.0, 1.0), PoleParameter);
  SeriesControl tiny{3, 1e-12};
  CHECK_THROWS_AS(specfun::kummer_1f1(1.0, 1.0, 30.0, tiny), NonConvergence);
}

TEST_CASE("erfi values, oddness, overflow guard") {
  CHECK(specfun::erfi(0.0) == 0.0);
  // Frozen from the series; cross-checked against quadrature of (2/sqrt(pi)) e^{t^2}.
  const double expected = 1.6504257587975429;
  CHECK(specfun::erfi(1.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(erfi_quadrature_oracle(1.0) == doctest::Approx(expected).epsilon(1e-9));
  for (double x : {0.3, 1.1, 2.7, 4.0})
    CHECK(specfun::erfi(-x) == doctest::Approx(-specfun::erfi(x)).epsilon(1e-14));
  CHECK_THROWS_AS(specfun::erfi(27.0), Overflow);
}

TEST_CASE("erfi derivative matches (2/sqrt(pi)) e^{x^2}") {
  const double h = 1e-5;
  for (double x : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double fd = (specfun::erfi(x + h) - specfun::erfi(x - h)) / (2 * h);
    const double exact = 2.0 / std::sqrt(M_PI) * std::exp(x * x);
    CHECK(std::abs(fd - exact) / exact < 1e-6);
  }
}

TEST_CASE("parabolic cylinder integer orders") {
  for (double z : {-2.0, -0.5, 0.0, 1.0, 3.0})
    CHECK(specfun::parabolic_cylinder_int(0, z) ==
          doctest::Approx(std::exp(-0.25 * z * z)).epsilon(1e-14));
  // D_1(2) = 2^{-1/2} e^{-1} H_1(sqrt 2) = 2/e
  CHECK(specfun::parabolic_cylinder_int(1, 2.0) ==
        doctest::Approx(0.7357588823428846).epsilon(1e-13));
  // D_2(0) = (1/2) H_2(0) = -1
  CHECK(specfun::parabolic_cylinder_int(2, 0.0) ==
        doctest::Approx(-1.0).epsilon(1e-14));
}
