#include "doctest.h"

#include <cmath>

#include "abspec/gauge.hpp"

using namespace abspec;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("pole config validation") {
  CHECK_THROWS_AS(PoleConfig(0.5, Vec2(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(PoleConfig(0.0, Vec2(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(PoleConfig(1.0, Vec2(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(PoleConfig(0.5 + 1e-13, Vec2(0, 0)), std::invalid_argument);
  const PoleConfig c(0.3, Vec2(0, 1));
  CHECK(c.direction_angle == doctest::Approx(kPi / 2));
  const PoleConfig c0(0.3, Vec2(0, 0));
  CHECK(c0.direction_angle == 0.0);
}

TEST_CASE("vector potential values") {
  const PoleConfig cfg(0.3, Vec2(0, 0));
  const Vec2 a1 = vector_potential(cfg, Vec2(1, 0));
  CHECK(a1.x() == doctest::Approx(0.0));
  CHECK(a1.y() == doctest::Approx(0.3));
  const Vec2 a2 = vector_potential(cfg, Vec2(0, 2));
  CHECK(a2.x() == doctest::Approx(-0.15));
  CHECK(a2.y() == doctest::Approx(0.0));
  CHECK_THROWS_AS(vector_potential(cfg, Vec2(0, 0)), std::domain_error);

  // |A| = alpha / r on random rays
  const PoleConfig off(0.7, Vec2(0.2, -0.1));
  for (int i = 1; i <= 10; ++i) {
    const double r = 0.1 * i;
    const double t = 0.7 * i;
    const Vec2 x = off.pole + r * Vec2(std::cos(t), std::sin(t));
    CHECK(vector_potential(off, x).norm() == doctest::Approx(0.7 / r).epsilon(1e-12));
  }
}

TEST_CASE("curl-free at O(h^2) and circulation 2 pi alpha") {
  const PoleConfig cfg(0.3, Vec2(0.1, 0.05));
  // centered finite-difference curl at a point away from the pole
  auto curl_fd = [&](const Vec2& x, double h) {
    const double dady_x = (vector_potential(cfg, x + Vec2(0, h)).x() -
                           vector_potential(cfg, x - Vec2(0, h)).x()) /
                          (2 * h);
    const double dadx_y = (vector_potential(cfg, x + Vec2(h, 0)).y() -
                           vector_potential(cfg, x - Vec2(h, 0)).y()) /
                          (2 * h);
    return dadx_y - dady_x;
  };
  // exact curl is zero; the FD value is pure truncation error, O(h^2)
  const Vec2 x0(0.8, 0.4);
  const double c1 = std::abs(curl_fd(x0, 1e-2));
  const double c2 = std::abs(curl_fd(x0, 5e-3));
  const double c3 = std::abs(curl_fd(x0, 2.5e-3));
  CHECK(c1 < 1e-3);
  CHECK(c1 / c2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(c2 / c3 == doctest::Approx(4.0).epsilon(0.05));

  // circulation independent of radius (trapezoid on the circle)
  for (double r : {0.05, 0.3, 1.7}) {
    const int n = 4096;
    double circ = 0.0;
    for (int q = 0; q < n; ++q) {
      const double t = 2.0 * kPi * q / n;
      const Vec2 x = cfg.pole + r * Vec2(std::cos(t), std::sin(t));
      const Vec2 tau(-std::sin(t), std::cos(t));
      circ += vector_potential(cfg, x).dot(tau) * r * 2.0 * kPi / n;
    }
    CHECK(circ == doctest::Approx(2.0 * kPi * 0.3).epsilon(1e-10));
  }
}

TEST_CASE("angle functions and branch windows") {
  const PoleConfig c1(0.3, Vec2(1, 0));
  CHECK(theta_pole(c1, Vec2(2, 0)) == doctest::Approx(0.0));
  CHECK(theta_pole(c1, Vec2(1, -1)) == doctest::Approx(3 * kPi / 2));
  CHECK_THROWS_AS(theta_pole(c1, Vec2(1, 0)), std::domain_error);

  const PoleConfig c2(0.3, Vec2(0, 1));
  CHECK(theta_pole(c2, Vec2(0, 2)) == doctest::Approx(kPi / 2));
  CHECK(theta_origin_cut(c2, Vec2(0, -1)) == doctest::Approx(3 * kPi / 2));

  CHECK(theta_origin_cut(c1, Vec2(-1, 0)) == doctest::Approx(kPi));
  // branch-cut side convention: just below the positive axis is near 2 pi
  CHECK(theta_origin_cut(c1, Vec2(1, -1e-6)) > 2 * kPi - 1e-5);
  CHECK_THROWS_AS(theta_origin_cut(c1, Vec2(0, 0)), std::domain_error);

  // window property theta(a + r e^{it}) = t over the full window
  for (int i = 0; i < 16; ++i) {
    const double t = c1.direction_angle + 2.0 * kPi * (i + 0.3) / 16;
    const Vec2 x = c1.pole + 0.37 * Vec2(std::cos(t), std::sin(t));
    CHECK(theta_pole(c1, x) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("gauge phase values and cut behavior") {
  const PoleConfig cfg(0.3, Vec2(1, 0));
  CHECK(gauge_phase(cfg, Vec2(-1, 0)).real() == doctest::Approx(1.0));
  CHECK(gauge_phase(cfg, Vec2(2, 0)).real() == doctest::Approx(1.0));
  CHECK(std::abs(gauge_phase(cfg, Vec2(0.4, 0.9))) == doctest::Approx(1.0));
  CHECK_THROWS_AS(gauge_phase(cfg, Vec2(0.5, 0)), std::domain_error);

  // jump across the cut is |e^{i 2 pi alpha} - 1|
  const Complex above = gauge_phase(cfg, Vec2(0.5, 1e-6));
  const Complex below = gauge_phase(cfg, Vec2(0.5, -1e-6));
  const double jump = std::abs(above - below);
  const double expected = std::abs(std::polar(1.0, 2.0 * kPi * 0.3) - 1.0);
  CHECK(jump == doctest::Approx(expected).epsilon(1e-4));

  // continuity along a loop enclosing both 0 and a (never crossing the cut)
  Complex prev = gauge_phase(cfg, Vec2(2.5, 0));
  Complex first = prev;
  const int n = 2000;
  for (int q = 1; q <= n; ++q) {
    const double t = 2.0 * kPi * q / n;
    const Vec2 x = Vec2(0.5, 0) + 2.0 * Vec2(std::cos(t), std::sin(t));
    const Complex cur = gauge_phase(cfg, x);
    CHECK(std::abs(cur - prev) < 0.02);
    prev = cur;
  }
  CHECK(std::abs(prev - first) < 1e-9);

  // degenerate pole: identically one
  const PoleConfig at0(0.3, Vec2(0, 0));
  CHECK(gauge_phase(at0, Vec2(0.3, 0.2)) == Complex(1.0, 0.0));

  // side-resolved evaluation on the cut is deterministic and consistent
  const Complex plus = gauge_phase_on_side(cfg, Vec2(0.5, 0), +1);
  const Complex minus = gauge_phase_on_side(cfg, Vec2(0.5, 0), -1);
  CHECK(std::abs(plus - above) < 1e-5);
  CHECK(std::abs(minus - below) < 1e-5);
}

TEST_CASE("psi profiles") {
  CHECK(psi_profile(0.3, 0, Vec2(1, 0)).real() ==
        doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-12));
  const Complex v = psi_profile(0.3, 1, Vec2(0, 1));
  CHECK(v.real() == doctest::Approx(0.0));
  CHECK(v.imag() == doctest::Approx(std::pow(1.0, 0.7) / std::sqrt(2 * kPi)));

  // homogeneity |psi_k(s x)| = s^{|alpha-k|} |psi_k(x)|
  for (int k : {-2, 0, 1, 3}) {
    const double nu = std::abs(0.3 - k);
    const Vec2 x(0.4, -0.7);
    for (double s : {0.5, 2.0, 7.0}) {
      CHECK(std::abs(psi_profile(0.3, k, s * x)) ==
            doctest::Approx(std::pow(s, nu) * std::abs(psi_profile(0.3, k, x)))
                .epsilon(1e-12));
    }
  }
  CHECK(psi_profile(0.3, 2, Vec2(0, 0)) == Complex(0, 0));

  // magnetic gradient: finite differences of i grad + A psi match
  const double alpha = 0.3;
  const int k = 1;
  const Vec2 x(0.5, 0.3);
  const double h = 1e-6;
  const PoleConfig cfg0(alpha, Vec2(0, 0));
  const Complex I(0, 1);
  const Complex dx =
      (psi_profile(alpha, k, x + Vec2(h, 0)) - psi_profile(alpha, k, x - Vec2(h, 0))) /
      (2 * h);
  const Complex dy =
      (psi_profile(alpha, k, x + Vec2(0, h)) - psi_profile(alpha, k, x - Vec2(0, h))) /
      (2 * h);
  const Vec2 A = vector_potential(cfg0, x);
  const Complex u = psi_profile(alpha, k, x);
  const auto g = psi_profile_mag_gradient(alpha, k, x);
  CHECK(std::abs(g.x() - (I * dx + A.x() * u)) < 1e-8);
  CHECK(std::abs(g.y() - (I * dy + A.y() * u)) < 1e-8);
}
