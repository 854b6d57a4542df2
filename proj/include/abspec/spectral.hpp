#pragma once

#include <vector>

#include "abspec/assembly.hpp"
#include "abspec/gauge.hpp"

namespace abspec {

/// Complex samples of a field on the circle |x - center| = radius at the
/// equispaced angles t_q = theta0 + 2 pi q / Q.
struct CircleTrace {
  Vec2 center;
  double radius = 0.0;
  double theta0 = 0.0;
  int Q = 0;
  std::vector<Complex> samples;
};

/// P1 interpolation at Q points (Q a power of two >= 64). Throws if the
/// circle leaves the mesh or if the radius is under-resolved (radius < 2
/// local element diameters).
CircleTrace trace_circle(const FieldSampler& field, const Vec2& center, double radius,
                         int Q, double theta0 = 0.0);

/// Full mode set of one trace: v_j = sqrt(2 pi)/Q sum_q s_q e^{-i j t_q} for
/// j in [-Q/2, Q/2), matching v_j = (1/sqrt(2 pi)) ∫ φ e^{-ijt} dt.
struct FourierModes {
  int Q = 0;
  double theta0 = 0.0;
  std::vector<Complex> v;  // index q holds mode j = q - Q/2
  Complex at(int j) const { return v[static_cast<size_t>(j + Q / 2)]; }
};
FourierModes fourier_modes(const CircleTrace& trace);

/// Relative Parseval defect of a trace: |sum_j |v_j|^2 - (2pi/Q) sum_q |s_q|^2|
/// over the mean of the two (an exact discrete identity up to rounding).
double parseval_defect(const CircleTrace& trace);

/// Mode table v_j(r) on a geometric radius grid, for |j| <= J.
struct FourierTrace {
  Vec2 center;
  double theta0 = 0.0;
  double alpha = 0.0;
  int J = 0;
  std::vector<double> radii;  // increasing, geometric
  Eigen::MatrixXcd v;         // (2J+1) x radii.size(); row index j + J
  Complex v_at(int j, int ri) const { return v(j + J, ri); }
  /// v_j at radius r by power-law-aware interpolation.
  Complex v_interp(int j, double r) const;
  double max_parseval_defect = 0.0;
};

FourierTrace build_fourier_trace(const FieldSampler& field, const PoleConfig& cfg,
                                 double r_min, double r_max, int n_radii, int J, int Q);

struct BetaResult {
  Complex beta;
  double spread = 0.0;
  bool zero_flagged = false;
};

struct BetaOptions {
  double spread_tol = 0.10;   // beyond this an R-dependence error is raised
  double zero_floor = 0.0;    // |beta| at or below this is flagged zero
  bool throw_on_spread = true;
};

/// beta_j by the R-independent integral formula
///   beta_j(R) = v_j(R)/R^nu + lambda/(2 nu) ∫_0^R (s^{1-nu} - s^{1+nu}/R^{2 nu}) v_j(s) ds,
/// nu = |alpha - j|; the unresolved core s < radii.front() uses the fitted
/// local power law v_j(s) ~ beta s^nu. Returns the mean over R_grid and the
/// relative spread.
BetaResult beta_coefficient(const FourierTrace& ft, int j, double lambda,
                            const std::vector<double>& R_grid,
                            const BetaOptions& opt = {});

/// beta for every mode |j| <= J with cross-mode zero flagging.
struct BetaTable {
  double alpha = 0.0;
  int J = 0;
  std::vector<BetaResult> rows;  // index j + J
  const BetaResult& at(int j) const { return rows[static_cast<size_t>(j + J)]; }
};
BetaTable compute_beta_table(const FourierTrace& ft, double lambda,
                             const std::vector<double>& R_grid,
                             double relative_zero_floor = 1e-6);

struct VanishingOrder {
  int k = 0;
  double order = 0.0;
  Complex beta_k;
  double loglog_slope = 0.0;  // consistency: should match order within 0.05
};

/// k = argmin |alpha - j| among modes with |beta_j| above
/// threshold * max_j |beta_j|; throws a degenerate-field error if no mode
/// survives the threshold.
VanishingOrder vanishing_order(const FourierTrace& ft, const BetaTable& table,
                               double threshold);

/// (1/sqrt(2 pi)) sum_{|j| <= J_trunc} v_j e^{ijt} from one trace's modes.
Complex reconstruct_expansion(const FourierModes& modes, double t, int J_trunc);
/// Same from the interpolated table.
Complex reconstruct_expansion(const FourierTrace& ft, double r, double t, int J_trunc);

}  // namespace abspec
