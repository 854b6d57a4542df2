#include "abspec/almgren.hpp"

#include <cmath>
#include <stdexcept>

#include "abspec/spectral.hpp"

namespace abspec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

AlmgrenCurve frequency_curve(const FieldSampler& field, double lambda,
                             const PoleConfig& cfg, const std::vector<double>& radii,
                             const Vec2& center) {
  AlmgrenCurve curve;
  curve.center = center;
  curve.lambda = lambda;
  const double pole_dist = (cfg.pole - center).norm();
  for (double r : radii) {
    if (!(r > pole_dist))
      throw std::invalid_argument(
          "frequency_curve: radius grid must stay outside the pole offset");
    // H by circle-trace quadrature; trace_circle enforces the resolution floor
    const CircleTrace trace = trace_circle(field, center, r, 256, 0.0);
    double h = 0.0;
    for (const Complex& s : trace.samples) h += std::norm(s);
    h *= 2.0 * kPi / trace.Q;
    if (!(h > 1e-300)) throw std::runtime_error("frequency_curve: H positivity lost");

    const double e = integrate_mesh_disk(
        field.mesh(), center, r, 6, [&](const Vec2& x, int t) {
          return magnetic_gradient(field, cfg, t, x).squaredNorm() -
                 lambda * std::norm(field.value_in(t, x));
        });
    curve.radii.push_back(r);
    curve.H.push_back(h);
    curve.E.push_back(e);
    curve.N.push_back(e / h);
  }
  return curve;
}

double dH_identity_check(const AlmgrenCurve& curve) {
  const int n = static_cast<int>(curve.radii.size());
  if (n < 5) throw std::invalid_argument("dH_identity_check: need at least 5 grid points");
  double worst = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double dh =
        (curve.H[i + 1] - curve.H[i - 1]) / (curve.radii[i + 1] - curve.radii[i - 1]);
    const double rhs = 2.0 / curve.radii[i] * curve.E[i];
    const double scale = std::max(std::abs(rhs), 1e-300);
    worst = std::max(worst, std::abs(dh - rhs) / scale);
  }
  return worst;
}

PoleTerm pole_term(const Complex& beta0, const Complex& beta1, const Vec2& a, double alpha) {
  PoleTerm term;
  term.beta0 = beta0;
  term.beta1 = beta1;
  term.a = a;
  const Complex a_conj(a.x(), -a.y());
  term.value = 2.0 * alpha * (1.0 - alpha) * std::real(beta0 * std::conj(beta1) * a_conj);
  term.bound = 2.0 * alpha * (1.0 - alpha) * a.norm() * std::abs(beta0) * std::abs(beta1);
  return term;
}

bool frequency_bound_check(const AlmgrenCurve& curve, double order, double delta,
                           double window_lo, double window_hi) {
  bool seen = false;
  for (size_t i = 0; i < curve.radii.size(); ++i) {
    const double r = curve.radii[i];
    if (r < window_lo || r > window_hi) continue;
    seen = true;
    if (curve.N[i] > order + delta) return false;
  }
  if (!seen) throw std::invalid_argument("frequency_bound_check: window misses the grid");
  return true;
}

}  // namespace abspec
