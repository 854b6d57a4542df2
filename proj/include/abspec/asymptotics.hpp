#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "abspec/almgren.hpp"
#include "abspec/eigensolve.hpp"
#include "abspec/spectral.hpp"

namespace abspec {

/// Truncated entire profile Psi_p: magnetic-harmonic on D_S with pole vertex
/// at p pinned to zero and Dirichlet data e^{i alpha (theta_p - theta_0^p)} psi_k
/// on ∂D_S.
struct LimitProfile {
  double alpha = 0.0;
  int k = 0;
  double S = 0.0;
  Vec2 p;
  Mesh mesh;
  Eigen::VectorXcd nodal;
  double tail_energy = 0.0;     // ∫_{D_S \ D_{S/2}} |(i∇+A_p)(Psi - far data)|^2
  double far_field_error = 0.0; // max |Psi - data|/|psi_k| on ∂D_{S/2}
};

LimitProfile solve_limit_profile(double alpha, int k, double S, double h_max,
                                 const Vec2& p = Vec2(1, 0));

/// F_p(R) = ∫_{D_R} |(i∇+A_p) Psi_p - e^{i alpha (theta_p - theta_0^p)} (i∇+A_0) psi_k|^2 dx
/// for each R plus the extrapolated limit L (Richardson on the last three
/// entries of a geometric R_list). Throws if F fails to be nondecreasing.
struct LimitConstant {
  std::vector<double> R;
  std::vector<double> F;
  double L = 0.0;
  double tail_margin = 0.0;  // F(R_max) - F(R_max/2)
};
LimitConstant limit_constant(const LimitProfile& profile, double alpha, int k,
                             const std::vector<double>& R_list);

/// One F_p(R) evaluation (shared by limit_constant and the tail diagnostic).
double profile_gap_integral(const LimitProfile& profile, double R);

/// Rescaled eigenfunction sampler x -> phi_a(|a| x)/|a|^order.
struct BlowUpField {
  const FieldSampler* field = nullptr;
  double abs_a = 0.0;
  double order = 0.0;
  Complex operator()(const Vec2& x) const;
};

/// Relative L^2 distance on the annulus r1 < |x| < r2 between a blow-up
/// field and the best complex multiple c of the profile; returns (distance,
/// c).
struct BlowUpDistance {
  double distance = 0.0;
  Complex c;
};
BlowUpDistance blowup_distance(const std::function<Complex(const Vec2&)>& field,
                               const LimitProfile& profile, double r1, double r2);

/// |a|^{-2 order} ∫_Ω |(i∇+A_a) phi_a - e^{i alpha (theta_a - theta_0^a)} (i∇+A_0) phi_0|^2 dx
/// with elements crossed by the cut segment integrated per side.
double eigenfunction_gap(const AssembledSystem& sys_a, const Eigen::VectorXcd& nodal_a,
                         const AssembledSystem& sys_0, const Eigen::VectorXcd& nodal_0,
                         double order);

/// Least-squares slope of log|diff| vs log|a|; drops samples below
/// noise_floor and errors when fewer than 4 usable samples remain.
struct RateFit {
  double slope = 0.0;
  double r2 = 0.0;
  int used = 0;
  int dropped = 0;
};
RateFit fit_rate(const std::vector<std::pair<double, double>>& samples,
                 double noise_floor = 0.0);

/// Spread max q / min q of q(|a|) = |diff| / |a|^{2 order}.
double quotient_boundedness(const std::vector<std::pair<double, double>>& samples,
                            double order, double noise_floor = 0.0);

struct SweepConfig {
  double alpha = 0.3;
  Vec2 p = Vec2(1, 0);
  std::vector<double> a_list;  // decreasing positive
  int n0 = 1;
  double h_max = 0.04;
  double grading = 0.0;  // 0 -> default_grading_exponent(alpha)
  double K = 4.0;
  double eig_tol = 1e-9;
  int solve_count = 6;
  double rel_gap = 0.01;
  int quadrature_order = 4;
  int trace_Q = 128;
  int mode_window = 8;
  std::vector<double> beta_R_grid = {0.2, 0.3, 0.4, 0.5};
  double almgren_r_hi = 0.3;
  const LimitProfile* profile = nullptr;  // enables blow-up diagnostics
};

struct SweepSample {
  double abs_a = 0.0;
  double lambda_a = 0.0;
  double diff = 0.0;  // lambda_0 - lambda_a, sign reported not assumed
  double H_K = 0.0;   // H(phi_a, K|a|)
  double h_ratio = 0.0;  // |a|^order / sqrt(H_K)
  double gap = 0.0;
  double blowup_dist = 0.0;
  Complex blowup_c;
  double order_detected = 0.0;
  Complex beta0, beta1, beta_k;
  double beta_spread_leading = 0.0;
  double n_max_window = 0.0;  // max Almgren N on [4|a|, almgren_r_hi]
  double pole_term_value = 0.0;
  double parseval_defect = 0.0;
  bool hardy_ok = false, poincare_ok = false;
};

struct SweepReport {
  SweepConfig config;
  int k = 0;             // dominant mode of the reference state
  double order = 0.0;    // |alpha - k|
  double lambda0 = 0.0;
  Complex beta_k0;       // leading beta of the reference eigenfunction
  double order0 = 0.0;   // detected vanishing order at a = 0
  std::vector<SweepSample> samples;
  RateFit rate;
  double quotient_spread = 0.0;
  double noise_floor = 0.0;
};

/// Full sweep: per |a| remesh (deformation of the a=0 mesh), assemble,
/// solve, phase-align against the a=0 reference, extract the beta table and
/// local diagnostics. Aborts if simplicity fails at any sample.
SweepReport pole_sweep(const Domain& domain, const SweepConfig& config);

}  // namespace abspec
