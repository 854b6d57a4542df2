#pragma once

#include <vector>

#include "abspec/gauge.hpp"
#include "abspec/geometry.hpp"

namespace abspec {

/// Gamma(x) for x > 0 by a Lanczos approximation (relative error < 1e-12).
double gamma_real(double x);

/// Bessel function of the first kind, real order nu >= 0, x >= 0.
/// Ascending series for x <= max(10, 2 nu); continued-fraction normalized
/// backward recurrence beyond. Relative error < 1e-10 on (0, 50].
/// Throws for x > 1e4 (overflow guard).
double bessel_j(double nu, double x);

/// d/dx J_nu(x) via J_nu' = (nu/x) J_nu - J_{nu+1}.
double bessel_j_deriv(double nu, double x);

/// m-th positive zero j_{nu,m}, nu in [0, 10], m in [1, 20]; scan bracketing
/// followed by bisection.
double bessel_zero(double nu, int m);

/// One exact eigenvalue of the Aharonov-Bohm disk problem (unit disk,
/// centered pole): lambda = j_{nu,m}^2 with nu = |alpha - j|; the angular
/// mode j gives the vanishing order |alpha - j| of the eigenfunction.
struct DiskEigenEntry {
  int j;
  int m;
  double nu;
  double zero;
  double lambda;
};

struct DiskEigenTable {
  double alpha = 0.0;
  std::vector<DiskEigenEntry> entries;  // sorted by ascending lambda
};

/// Lowest `count` eigenvalues over modes j and radial indices m.
DiskEigenTable disk_spectrum(double alpha, int count);

/// Closed-form eigenfunction c J_nu(z r) e^{i j t}, L^2(D_1)-normalized; the
/// constant c comes from quadrature of r J_nu(z r)^2 on [0, 1].
struct DiskEigenFunction {
  double alpha;
  DiskEigenEntry entry;
  double norm_const;

  Complex operator()(const Vec2& x) const;
  Complex value_polar(double r, double t) const;
  double radial(double r) const;
  double radial_deriv(double r) const;
  /// (i grad + A_0) u = [ i f'(r) n(t) + ((alpha-j)/r) f(r) tau(t) ] e^{ijt}
  Eigen::Vector2<Complex> mag_gradient(const Vec2& x) const;
};

DiskEigenFunction disk_eigenfunction(double alpha, const DiskEigenEntry& entry);

}  // namespace abspec
