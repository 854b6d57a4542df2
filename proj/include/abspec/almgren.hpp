#pragma once

#include <vector>

#include "abspec/assembly.hpp"

namespace abspec {

/// Almgren frequency data on a radius grid:
///   H(u,r) = (1/r) ∫_{∂D_r(center)} |u|^2 ds,
///   E(u,r) = ∫_{D_r(center)} |(i∇+A_a)u|^2 - lambda |u|^2 dx,
///   N = E/H.
/// The center is the origin for the frequency of the paper (with circles
/// around 0 even when the pole sits at a != 0).
struct AlmgrenCurve {
  Vec2 center;
  double lambda = 0.0;
  std::vector<double> radii, H, E, N;
};

AlmgrenCurve frequency_curve(const FieldSampler& field, double lambda,
                             const PoleConfig& cfg, const std::vector<double>& radii,
                             const Vec2& center = Vec2(0, 0));

/// Max relative defect of the identity dH/dr = (2/r) E over interior grid
/// points (centered finite differences). Needs >= 5 grid points.
double dH_identity_check(const AlmgrenCurve& curve);

/// Pole term of the dE/dr identity in closed form,
///   M = 2 alpha (1-alpha) Re( beta0 conj(beta1) (a1 - i a2) ),
/// with the bound |M| <= 2 alpha (1-alpha) |a| |beta0| |beta1|.
struct PoleTerm {
  double value = 0.0;
  Complex beta0, beta1;
  Vec2 a;
  double bound = 0.0;
};
PoleTerm pole_term(const Complex& beta0, const Complex& beta1, const Vec2& a, double alpha);

/// True iff N(r) <= order + delta throughout [window_lo, window_hi].
bool frequency_bound_check(const AlmgrenCurve& curve, double order, double delta,
                           double window_lo, double window_hi);

}  // namespace abspec
