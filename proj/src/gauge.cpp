#include "abspec/gauge.hpp"

#include <cmath>
#include <stdexcept>

namespace abspec {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kCutTol = 1e-13;
const double kInvSqrt2Pi = 1.0 / std::sqrt(kTwoPi);

// atan2 shifted into [theta0, theta0 + 2*pi); angles within kCutTol of the
// window edges snap to the lower edge (deterministic branch selection).
double shifted_angle(const Vec2& rel, double theta0, int side) {
  double t = std::atan2(rel.y(), rel.x());
  while (t < theta0) t += kTwoPi;
  while (t >= theta0 + kTwoPi) t -= kTwoPi;
  if (side > 0) {
    if (t - theta0 >= kTwoPi - kCutTol) t = theta0;
  } else if (side < 0) {
    if (t - theta0 <= kCutTol) t = theta0 + kTwoPi;
  } else {
    if (t - theta0 >= kTwoPi - kCutTol) t = theta0;
  }
  return t;
}
}  // namespace

PoleConfig::PoleConfig(double alpha_, const Vec2& pole_) : alpha(alpha_), pole(pole_) {
  const double tol = 1e-12;
  if (!(alpha > tol && alpha < 1.0 - tol) || std::abs(alpha - 0.5) <= tol)
    throw std::invalid_argument("PoleConfig: alpha must lie in (0,1) away from {0, 1/2, 1}");
  if (pole.norm() == 0.0) {
    direction_angle = 0.0;
  } else {
    direction_angle = std::atan2(pole.y(), pole.x());
    if (direction_angle < 0.0) direction_angle += kTwoPi;
  }
}

double CutSegment::distance(const Vec2& x) const {
  if (degenerate()) return (x - a).norm();
  const double len2 = a.squaredNorm();
  const double s = std::clamp(x.dot(a) / len2, 0.0, 1.0);
  return (x - s * a).norm();
}

Vec2 vector_potential(const PoleConfig& cfg, const Vec2& x) {
  const Vec2 rel = x - cfg.pole;
  const double r2 = rel.squaredNorm();
  if (r2 == 0.0) throw std::domain_error("vector_potential: evaluation at the pole");
  return cfg.alpha / r2 * Vec2(-rel.y(), rel.x());
}

double theta_pole(const PoleConfig& cfg, const Vec2& x) {
  const Vec2 rel = x - cfg.pole;
  if (rel.norm() == 0.0) throw std::domain_error("theta_pole: evaluation at the pole");
  return shifted_angle(rel, cfg.direction_angle, 0);
}

double theta_origin_cut(const PoleConfig& cfg, const Vec2& x) {
  if (x.norm() == 0.0) throw std::domain_error("theta_origin_cut: evaluation at the origin");
  return shifted_angle(x, cfg.direction_angle, 0);
}

Complex gauge_phase(const PoleConfig& cfg, const Vec2& x) {
  if (cfg.pole_at_origin()) return Complex(1.0, 0.0);
  const CutSegment cut{cfg.pole};
  if (cut.distance(x) < kCutTol * std::max(1.0, cfg.pole.norm())) {
    if (x.norm() < kCutTol || (x - cfg.pole).norm() < kCutTol)
      throw std::domain_error("gauge_phase: evaluation at an endpoint of the cut");
    throw std::domain_error("gauge_phase: evaluation on the cut segment");
  }
  const double diff = theta_origin_cut(cfg, x) - theta_pole(cfg, x);
  return std::polar(1.0, cfg.alpha * diff);
}

Complex gauge_phase_on_side(const PoleConfig& cfg, const Vec2& x, int side) {
  if (cfg.pole_at_origin()) return Complex(1.0, 0.0);
  const double t0 = shifted_angle(x, cfg.direction_angle, side);
  const double ta = shifted_angle(x - cfg.pole, cfg.direction_angle, side);
  return std::polar(1.0, cfg.alpha * (t0 - ta));
}

Complex psi_profile(double alpha, int k, const Vec2& x) {
  const double r = x.norm();
  const double nu = std::abs(alpha - k);
  if (r == 0.0) return Complex(0.0, 0.0);
  const double t = std::atan2(x.y(), x.x());
  return std::pow(r, nu) * kInvSqrt2Pi * std::polar(1.0, k * t);
}

Eigen::Vector2<Complex> psi_profile_mag_gradient(double alpha, int k, const Vec2& x) {
  const double r = x.norm();
  if (r == 0.0) throw std::domain_error("psi_profile_mag_gradient: evaluation at the origin");
  const double nu = std::abs(alpha - k);
  const double t = std::atan2(x.y(), x.x());
  const Vec2 n(std::cos(t), std::sin(t));
  const Vec2 tau(-std::sin(t), std::cos(t));
  const Complex scale = std::pow(r, nu - 1.0) * kInvSqrt2Pi * std::polar(1.0, k * t);
  const Complex inu(0.0, nu);
  Eigen::Vector2<Complex> g;
  g.x() = scale * (inu * n.x() + (alpha - k) * tau.x());
  g.y() = scale * (inu * n.y() + (alpha - k) * tau.y());
  return g;
}

}  // namespace abspec
