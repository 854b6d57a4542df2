#include "abspec/oracle_disk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos g = 7, n = 9
const double kLanczos[9] = {0.99999999999980993,     676.5203681218851,
                            -1259.1392167224028,     771.32342877765313,
                            -176.61502916214059,     12.507343278686905,
                            -0.13857109526572012,    9.9843695780195716e-6,
                            1.5056327351493116e-7};

double bessel_j_series(double nu, double x) {
  // J_nu(x) = sum_m (-1)^m / (m! Gamma(nu+m+1)) (x/2)^{nu+2m}
  const double x2 = 0.5 * x;
  double term = std::pow(x2, nu) / gamma_real(nu + 1.0);
  double sum = term;
  const double q = x2 * x2;
  for (int m = 1; m <= 400; ++m) {
    term *= -q / (m * (nu + m));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) return sum;
  }
  throw std::runtime_error("bessel_j: series did not converge");
}

// Continued-fraction normalized backward recurrence (Numerical Recipes
// style bessjy, J part only). Valid for x >= 2.
double bessel_j_cf(double nu, double x) {
  const int kMaxIt = 10000;
  const double kEps = 1e-16, kFpMin = 1e-300;
  const double xi = 1.0 / x, xi2 = 2.0 * xi;
  const double w = xi2 / kPi;  // Wronskian 2/(pi x)

  const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
  const double xmu = nu - nl;

  // CF1: h = J'_nu / J_nu, isign tracks the sign of J_nu
  int isign = 1;
  double h = nu * xi;
  if (h < kFpMin) h = kFpMin;
  double b = xi2 * nu;
  double d = 0.0, c = h;
  for (int i = 1; i <= kMaxIt; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < kEps) break;
    if (i == kMaxIt) throw std::runtime_error("bessel_j: CF1 did not converge");
  }

  // downward recurrence from nu to xmu with an arbitrary scale
  double rjl = isign * 1e-30, rjpl = h * rjl;
  const double rjl1 = rjl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;  // J'_mu / J_mu

  // CF2: p + i q = (J'_mu + i Y'_mu) / (J_mu + i Y_mu)
  double a = 0.25 - xmu * xmu;
  double p = -0.5 * xi, q = 1.0;
  double br = 2.0 * x, bi = 2.0;
  double fct = a * xi / (p * p + q * q);
  double cr = br + q * fct, ci = bi + p * fct;
  double den = br * br + bi * bi;
  double dr = br / den, di = -bi / den;
  double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (int i = 2; i <= kMaxIt; ++i) {
    a += 2 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
    fct = a / (cr * cr + ci * ci);
    cr = br + cr * fct;
    ci = bi - ci * fct;
    if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
    den = dr * dr + di * di;
    dr = dr / den;
    di = -di / den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
    if (i == kMaxIt) throw std::runtime_error("bessel_j: CF2 did not converge");
  }

  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  return rjl1 * (rjmu / rjl);
}

}  // namespace

double gamma_real(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_real: requires x > 0");
  if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_real(1.0 - x));
  const double z = x - 1.0;
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double bessel_j(double nu, double x) {
  if (nu < 0.0) throw std::domain_error("bessel_j: requires nu >= 0");
  if (x < 0.0) throw std::domain_error("bessel_j: requires x >= 0");
  if (x > 1e4) throw std::domain_error("bessel_j: x too large");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double switch_radius = std::max(10.0, 2.0 * nu);
  if (x <= switch_radius) return bessel_j_series(nu, x);
  return bessel_j_cf(nu, x);
}

double bessel_j_deriv(double nu, double x) {
  if (x == 0.0) {
    if (nu == 1.0) return 0.5;
    return nu < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return (nu / x) * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

double bessel_zero(double nu, int m) {
  if (nu < 0.0 || nu > 10.0) throw std::domain_error("bessel_zero: nu must lie in [0, 10]");
  if (m < 1 || m > 20) throw std::domain_error("bessel_zero: m must lie in [1, 20]");

  // scan for sign changes; consecutive zeros are separated by > 2.8 here
  const double step = 0.2;
  double x_prev = 0.05;
  double f_prev = bessel_j(nu, x_prev);
  int found = 0;
  double lo = 0.0, hi = 0.0;
  for (double x = x_prev + step; x < 200.0; x += step) {
    const double f = bessel_j(nu, x);
    if (f_prev * f < 0.0) {
      ++found;
      if (found == m) {
        lo = x - step;
        hi = x;
        break;
      }
    }
    f_prev = f;
  }
  if (hi == 0.0) throw std::runtime_error("bessel_zero: bracket failure");

  double flo = bessel_j(nu, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = bessel_j(nu, mid);
    if (flo * fmid <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
    if (hi - lo < 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

DiskEigenTable disk_spectrum(double alpha, int count) {
  const double tol = 1e-12;
  if (!(alpha > tol && alpha < 1.0 - tol) || std::abs(alpha - 0.5) <= tol)
    throw std::invalid_argument("disk_spectrum: alpha must lie in (0,1) away from {0, 1/2, 1}");
  if (count < 1) throw std::invalid_argument("disk_spectrum: count must be >= 1");
  if (count > 40) throw std::invalid_argument("disk_spectrum: count capped at 40");

  DiskEigenTable table;
  table.alpha = alpha;
  // the lowest zero of order nu exceeds nu, so lambda >= nu^2 prunes modes
  double cutoff = std::numeric_limits<double>::max();
  for (int absj = 0; absj <= count + 2; ++absj) {
    for (int sign = 0; sign < (absj == 0 ? 1 : 2); ++sign) {
      const int j = sign == 0 ? absj : -absj;
      const double nu = std::abs(alpha - j);
      if (nu > 10.0 || nu * nu > cutoff) continue;
      for (int m = 1; m <= std::min(20, count); ++m) {
        const double z = bessel_zero(nu, m);
        table.entries.push_back({j, m, nu, z, z * z});
        if (z * z > cutoff) break;
      }
      std::sort(table.entries.begin(), table.entries.end(),
                [](const DiskEigenEntry& a, const DiskEigenEntry& b) {
                  return a.lambda < b.lambda;
                });
      if (static_cast<int>(table.entries.size()) >= count)
        cutoff = table.entries[count - 1].lambda;
    }
  }
  if (static_cast<int>(table.entries.size()) > count) table.entries.resize(count);
  return table;
}

Complex DiskEigenFunction::operator()(const Vec2& x) const {
  const double r = x.norm();
  if (r == 0.0) return Complex(0, 0);
  return value_polar(r, std::atan2(x.y(), x.x()));
}

Complex DiskEigenFunction::value_polar(double r, double t) const {
  return radial(r) * std::polar(1.0, entry.j * t);
}

double DiskEigenFunction::radial(double r) const {
  return norm_const * bessel_j(entry.nu, entry.zero * r);
}

double DiskEigenFunction::radial_deriv(double r) const {
  return norm_const * entry.zero * bessel_j_deriv(entry.nu, entry.zero * r);
}

Eigen::Vector2<Complex> DiskEigenFunction::mag_gradient(const Vec2& x) const {
  const double r = x.norm();
  if (r == 0.0) throw std::domain_error("DiskEigenFunction: gradient at the pole");
  const double t = std::atan2(x.y(), x.x());
  const Vec2 n(std::cos(t), std::sin(t));
  const Vec2 tau(-std::sin(t), std::cos(t));
  const Complex phase = std::polar(1.0, entry.j * t);
  const Complex ifp(0.0, radial_deriv(r));
  const double ang = (alpha - entry.j) / r * radial(r);
  Eigen::Vector2<Complex> g;
  g.x() = phase * (ifp * n.x() + ang * tau.x());
  g.y() = phase * (ifp * n.y() + ang * tau.y());
  return g;
}

DiskEigenFunction disk_eigenfunction(double alpha, const DiskEigenEntry& entry) {
  // composite Gauss-Legendre (8 nodes/panel) for int_0^1 r J_nu(zr)^2 dr
  static const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                               0.7966664774136267, 0.9602898564975363};
  static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  const int panels = std::max(16, static_cast<int>(2.0 * entry.zero));
  double integral = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < 4; ++k) {
      for (double s : {mid - half * gx[k], mid + half * gx[k]}) {
        const double j = bessel_j(entry.nu, entry.zero * s);
        integral += gw[k] * half * s * j * j;
      }
    }
  }
  DiskEigenFunction f;
  f.alpha = alpha;
  f.entry = entry;
  f.norm_const = 1.0 / std::sqrt(2.0 * kPi * integral);
  return f;
}

}  // namespace abspec
