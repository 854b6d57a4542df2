#pragma once

#include <complex>

#include "abspec/geometry.hpp"

namespace abspec {

using Complex = std::complex<double>;

/// Circulation alpha in (0,1)\{1/2} plus the pole position a. direction_angle
/// is the polar angle of a in [0, 2*pi), taken as 0 when a = 0.
struct PoleConfig {
  double alpha;
  Vec2 pole;
  double direction_angle;

  PoleConfig(double alpha_, const Vec2& pole_);

  bool pole_at_origin() const { return pole.norm() == 0.0; }
};

/// The segment Gamma_a = { t*a : t in [0,1] } carrying the phase jump of
/// theta_0^a - theta_a.
struct CutSegment {
  Vec2 a;
  bool degenerate() const { return a.norm() == 0.0; }
  double distance(const Vec2& x) const;
};

/// A_a(x) = alpha * (-(x2-a2), x1-a1) / |x-a|^2. Throws on x == pole.
Vec2 vector_potential(const PoleConfig& cfg, const Vec2& x);

/// Polar angle centered at the pole, valued in [theta, theta+2*pi) with
/// theta = cfg.direction_angle. Throws on x == pole.
double theta_pole(const PoleConfig& cfg, const Vec2& x);

/// Polar angle centered at the origin, same branch window as theta_pole.
/// Throws on x == 0.
double theta_origin_cut(const PoleConfig& cfg, const Vec2& x);

/// e^{i alpha (theta_0^a - theta_a)(x)}; continuous off the segment [0, a],
/// identically 1 when a = 0. Throws if x lies on the open cut segment.
Complex gauge_phase(const PoleConfig& cfg, const Vec2& x);

/// Side-aware variant for quadrature on elements split by the cut line:
/// side > 0 evaluates as from the counterclockwise side of the ray at
/// direction_angle, side < 0 from the clockwise side. Points away from the
/// cut are unaffected.
Complex gauge_phase_on_side(const PoleConfig& cfg, const Vec2& x, int side);

/// psi_k(r(cos t, sin t)) = r^{|alpha-k|} e^{ikt} / sqrt(2 pi); the magnetic
/// harmonic profile homogeneous of degree |alpha-k|.
Complex psi_profile(double alpha, int k, const Vec2& x);

/// (i grad + A_0) psi_k in Cartesian components:
///   (1/sqrt(2 pi)) r^{nu-1} [ i nu n(t) + (alpha-k) tau(t) ] e^{ikt},
/// nu = |alpha-k|, n = (cos t, sin t), tau = (-sin t, cos t).
Eigen::Vector2<Complex> psi_profile_mag_gradient(double alpha, int k, const Vec2& x);

}  // namespace abspec
