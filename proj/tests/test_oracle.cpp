#include "doctest.h"

#include <cmath>

#include "abspec/oracle_disk.hpp"

using namespace abspec;

namespace {
constexpr double kPi = 3.14159265358979323846;

// independent oracle for integer order: midpoint quadrature of
// (1/pi) ∫_0^pi cos(x sin t) dt
double j0_integral(double x) {
  const int n = 20000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kPi * (i + 0.5) / n;
    acc += std::cos(x * std::sin(t));
  }
  return acc / n;
}
}  // namespace

TEST_CASE("gamma function") {
  CHECK(gamma_real(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gamma_real(2.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gamma_real(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
  for (double x : {0.3, 0.7, 1.3, 1.999, 3.75, 9.2}) {
    CHECK(gamma_real(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
  }
}

TEST_CASE("bessel_j basics") {
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(0.3, 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(0.3, 2e4), std::domain_error);

  // leading series behavior J_nu(x) ~ (x/2)^nu / Gamma(nu+1)
  const double nu = 0.3, x = 1e-4;
  const double lead = std::pow(x / 2, nu) / gamma_real(nu + 1);
  CHECK(bessel_j(nu, x) / lead == doctest::Approx(1.0).epsilon(1e-6));

  // half-integer closed form J_{1/2}(x) = sqrt(2/(pi x)) sin x
  for (double xx : {0.5, 3.0, 12.0, 40.0}) {
    const double exact = std::sqrt(2.0 / (kPi * xx)) * std::sin(xx);
    CHECK(bessel_j(0.5, xx) == doctest::Approx(exact).epsilon(1e-10));
  }

  // series and continued-fraction branches agree against the integral
  // representation at integer order
  for (double xx : {1.0, 5.0, 9.9, 10.1, 25.0, 47.0}) {
    CHECK(bessel_j(0.0, xx) == doctest::Approx(j0_integral(xx)).epsilon(5e-9));
  }

  // recurrence J_{nu-1} + J_{nu+1} = (2 nu / x) J_nu across the switch
  for (double xx : {4.0, 11.0, 30.0}) {
    for (double nn : {0.7, 1.3, 3.3}) {
      const double lhs = bessel_j(nn - 0.5, xx) + bessel_j(nn + 1.5, xx);
      // order nn + 0.5 so both neighbors stay >= 0
      const double rhs = 2.0 * (nn + 0.5) / xx * bessel_j(nn + 0.5, xx);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("bessel zeros") {
  const double j01 = bessel_zero(0.0, 1);
  CHECK(j01 > 2.40);
  CHECK(j01 < 2.41);
  CHECK(std::abs(j0_integral(j01)) < 1e-9);
  CHECK(std::abs(bessel_j(0.0, 2.404825557695773)) < 1e-9);

  // J_{1/2} zeros are multiples of pi
  CHECK(bessel_zero(0.5, 1) == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(bessel_zero(0.5, 3) == doctest::Approx(3 * kPi).epsilon(1e-10));

  // monotonicity in the order
  const double j03_1 = bessel_zero(0.3, 1);
  CHECK(j03_1 > j01);
  CHECK(j03_1 < kPi);

  // interlacing j_{nu,m} < j_{nu+1,m} < j_{nu,m+1}
  for (double nu : {0.0, 0.3, 1.7}) {
    for (int m = 1; m <= 3; ++m) {
      CHECK(bessel_zero(nu, m) < bessel_zero(nu + 1.0, m));
      CHECK(bessel_zero(nu + 1.0, m) < bessel_zero(nu, m + 1));
    }
  }

  CHECK_THROWS_AS(bessel_zero(11.0, 1), std::domain_error);
  CHECK_THROWS_AS(bessel_zero(0.3, 21), std::domain_error);
}

TEST_CASE("disk spectrum structure") {
  const DiskEigenTable t = disk_spectrum(0.3, 8);
  REQUIRE(t.entries.size() == 8);
  for (size_t i = 0; i + 1 < t.entries.size(); ++i)
    CHECK(t.entries[i].lambda <= t.entries[i + 1].lambda);

  // ground state: k = 0, vanishing order 0.3 = min(alpha, 1 - alpha)
  CHECK(t.entries[0].j == 0);
  CHECK(t.entries[0].nu == doctest::Approx(0.3));
  CHECK(t.entries[0].lambda ==
        doctest::Approx(std::pow(bessel_zero(0.3, 1), 2)).epsilon(1e-12));

  // second distinct mode is k = 1 with nu = 0.7
  CHECK(t.entries[1].j == 1);
  CHECK(t.entries[1].nu == doctest::Approx(0.7));
  CHECK(bessel_zero(0.7, 1) < bessel_zero(0.3, 2));

  // alpha <-> 1 - alpha symmetry: identical eigenvalue lists
  const DiskEigenTable t2 = disk_spectrum(0.7, 8);
  for (size_t i = 0; i < t.entries.size(); ++i)
    CHECK(t.entries[i].lambda == doctest::Approx(t2.entries[i].lambda).epsilon(1e-12));

  CHECK_THROWS_AS(disk_spectrum(0.5, 4), std::invalid_argument);
}

TEST_CASE("disk eigenfunction normalization and ODE residual") {
  const DiskEigenTable t = disk_spectrum(0.3, 3);
  const DiskEigenFunction f = disk_eigenfunction(0.3, t.entries[0]);

  // boundary zero
  CHECK(std::abs(f(Vec2(1.0, 0.0))) < 1e-9);
  CHECK(std::abs(f(Vec2(0.0, -1.0))) < 1e-9);

  // modulus is radial
  const double m1 = std::abs(f(Vec2(0.4, 0.0)));
  const double m2 = std::abs(f(Vec2(0.0, 0.4)));
  const double m3 = std::abs(f(0.4 * Vec2(std::cos(1.1), std::sin(1.1))));
  CHECK(m1 == doctest::Approx(m2).epsilon(1e-12));
  CHECK(m1 == doctest::Approx(m3).epsilon(1e-12));

  // unit L2 norm over the disk (polar midpoint quadrature)
  double nrm = 0.0;
  const int nr = 2000, nt = 16;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) / nr;
    for (int q = 0; q < nt; ++q) {
      const double tt = 2.0 * kPi * (q + 0.5) / nt;
      nrm += std::norm(f.value_polar(r, tt)) * r * (1.0 / nr) * (2.0 * kPi / nt);
    }
  }
  CHECK(nrm == doctest::Approx(1.0).epsilon(1e-7));

  // closed-form normalization cross-check: c = 1/(sqrt(pi) |J_{nu+1}(z)|)
  const double c_exact =
      1.0 / (std::sqrt(kPi) * std::abs(bessel_j(t.entries[0].nu + 1.0, t.entries[0].zero)));
  CHECK(f.norm_const == doctest::Approx(c_exact).epsilon(1e-8));

  // radial ODE residual -v'' - v'/r + nu^2 v / r^2 = lambda v at sampled radii
  const double lam = t.entries[0].lambda, nu = t.entries[0].nu;
  for (double r : {0.2, 0.45, 0.8}) {
    const double h = 1e-5;
    const double v = f.radial(r);
    const double vp = (f.radial(r + h) - f.radial(r - h)) / (2 * h);
    const double vpp = (f.radial(r + h) - 2 * v + f.radial(r - h)) / (h * h);
    const double res = -vpp - vp / r + nu * nu / (r * r) * v - lam * v;
    CHECK(std::abs(res) < 1e-4 * std::abs(lam * v) + 1e-8);
  }

  // analytic radial derivative against finite differences
  for (double r : {0.3, 0.6}) {
    const double h = 1e-6;
    const double fd = (f.radial(r + h) - f.radial(r - h)) / (2 * h);
    CHECK(f.radial_deriv(r) == doctest::Approx(fd).epsilon(1e-6));
  }
}
