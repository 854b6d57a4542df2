#include "abspec/asymptotics.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace abspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

// e^{i alpha (theta_p - theta_a)} boundary/gauge factor of the profile
// problem: conjugate of gauge_phase (which carries theta_0^a - theta_a).
Complex profile_phase(const PoleConfig& cfg, const Vec2& x, int side) {
  return std::conj(gauge_phase_on_side(cfg, x, side));
}

// integral over mesh ∩ D_R(0) with per-side treatment of the cut [0, cut_end]
template <class F>
double integrate_disk_with_cut(const Mesh& mesh, double R, const Vec2& cut_end,
                               int degree, F&& f) {
  const TriQuadRule& rule = triangle_rule(degree);
  const Vec2 origin(0, 0);
  double acc = 0.0;
  std::vector<QuadPoint> pts;
  std::vector<Vec2> tri(3), clipped, pos, neg;
  const double R2 = R * R;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) tri[k] = mesh.vertices[tr[k]];
    int in_count = 0;
    for (int k = 0; k < 3; ++k) in_count += tri[k].squaredNorm() <= R2;
    const std::vector<Vec2>* region = &tri;
    if (in_count < 3) {
      clipped = clip_polygon_disk(tri, origin, R);
      if (clipped.empty()) continue;
      region = &clipped;
    }
    if (segment_intersects_triangle(origin, cut_end, tri[0], tri[1], tri[2])) {
      split_polygon_by_line(*region, origin, cut_end, pos, neg);
      pts.clear();
      append_polygon_quad(pts, pos, rule);
      for (const auto& qp : pts) acc += qp.w * f(qp.x, t, +1);
      pts.clear();
      append_polygon_quad(pts, neg, rule);
      for (const auto& qp : pts) acc += qp.w * f(qp.x, t, -1);
    } else {
      pts.clear();
      append_polygon_quad(pts, *region, rule);
      for (const auto& qp : pts) acc += qp.w * f(qp.x, t, 0);
    }
  }
  return acc;
}

int round_up_multiple(int value, int multiple) {
  return ((value + multiple - 1) / multiple) * multiple;
}

// smallest circle radius around `center` resolved by the local mesh
// (radius >= 5 local element diameters, the trace window floor)
double resolved_radius_floor(const Mesh& mesh, const PointLocator& locator,
                             const Vec2& center, double r_max) {
  double r = r_max / 4096.0;
  for (int it = 0; it < 60; ++it) {
    double max_diam = 0.0;
    bool ok = true;
    for (int q = 0; q < 16; ++q) {
      const double t = 2.0 * kPi * q / 16;
      const int tri = locator.locate(center + r * Vec2(std::cos(t), std::sin(t)));
      if (tri < 0) {
        ok = false;
        break;
      }
      max_diam = std::max(max_diam, mesh.triangle_diameter(tri));
    }
    if (ok && r >= 5.0 * max_diam) return r;
    r *= 1.25;
    if (r > r_max) break;
  }
  throw std::runtime_error("resolved_radius_floor: mesh cannot resolve any trace radius");
}

}  // namespace

Complex BlowUpField::operator()(const Vec2& x) const {
  const Vec2 phys = abs_a * x;
  return field->value(phys) / std::pow(abs_a, order);
}

LimitProfile solve_limit_profile(double alpha, int k, double S, double h_max,
                                 const Vec2& p) {
  if (!(S >= 8.0)) throw std::invalid_argument("solve_limit_profile: S must be >= 8");
  if (std::abs(p.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("solve_limit_profile: p must be a unit vector");

  LimitProfile prof;
  prof.alpha = alpha;
  prof.k = k;
  prof.S = S;
  prof.p = p;

  const double grading = 3.0;
  const double h_boundary = h_max * std::pow(0.5, 1.0 - 1.0 / grading);
  const int n_boundary =
      std::max(64, round_up_multiple(static_cast<int>(2.0 * kPi * S / h_boundary), 16));
  const Domain dom = make_disk_domain(S, n_boundary);
  prof.mesh = mesh_domain(dom, p, h_max, grading);

  const PoleConfig cfg(alpha, p);
  const AssembledSystem sys = assemble(prof.mesh, cfg, 4);

  // Dirichlet data on the outer circle (the cut [0, p] stays far inside)
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(prof.mesh.num_vertices());
  for (int b : prof.mesh.boundary_vertices) {
    const Vec2& x = prof.mesh.vertices[b];
    g[b] = std::conj(gauge_phase(cfg, x)) * psi_profile(alpha, k, x);
  }

  const Eigen::VectorXcd rhs_full = sys.stiffness_full * g;
  Eigen::VectorXcd rhs(sys.dim());
  for (int i = 0; i < sys.dim(); ++i) rhs[i] = -rhs_full[sys.free_to_vertex[i]];

  Eigen::ConjugateGradient<Eigen::SparseMatrix<Complex>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<Complex, Eigen::Lower,
                                                     Eigen::AMDOrdering<int>>>
      cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(20000);
  cg.compute(sys.stiffness);
  if (cg.info() != Eigen::Success)
    throw std::runtime_error("solve_limit_profile: preconditioner setup failed");
  const Eigen::VectorXcd u = cg.solve(rhs);
  if (cg.info() != Eigen::Success)
    throw std::runtime_error("solve_limit_profile: CG did not converge");

  prof.nodal = g;
  for (int i = 0; i < sys.dim(); ++i) prof.nodal[sys.free_to_vertex[i]] = u[i];
  prof.nodal[prof.mesh.pole_vertex] = Complex(0, 0);

  prof.tail_energy = profile_gap_integral(prof, S * (1.0 - 1e-9)) -
                     profile_gap_integral(prof, S / 2.0);

  PointLocator locator(prof.mesh);
  FieldSampler field(prof.mesh, locator, prof.nodal);
  double worst = 0.0;
  for (int q = 0; q < 256; ++q) {
    const double t = 2.0 * kPi * (q + 0.5) / 256;
    const Vec2 x = 0.5 * S * Vec2(std::cos(t), std::sin(t));
    const Complex data = std::conj(gauge_phase(cfg, x)) * psi_profile(alpha, k, x);
    worst = std::max(worst, std::abs(field.value(x) - data) / std::abs(psi_profile(alpha, k, x)));
  }
  prof.far_field_error = worst;
  return prof;
}

double profile_gap_integral(const LimitProfile& profile, double R) {
  const PoleConfig cfg(profile.alpha, profile.p);
  PointLocator locator(profile.mesh);
  FieldSampler field(profile.mesh, locator, profile.nodal);
  return integrate_disk_with_cut(
      profile.mesh, R, profile.p, 6, [&](const Vec2& x, int t, int side) {
        const Eigen::Vector2<Complex> gp = magnetic_gradient(field, cfg, t, x);
        const Complex phase = profile_phase(cfg, x, side);
        const Eigen::Vector2<Complex> gk =
            psi_profile_mag_gradient(profile.alpha, profile.k, x);
        return (gp - phase * gk).squaredNorm();
      });
}

LimitConstant limit_constant(const LimitProfile& profile, double alpha, int k,
                             const std::vector<double>& R_list) {
  if (std::abs(alpha - profile.alpha) > 1e-14 || k != profile.k)
    throw std::invalid_argument("limit_constant: alpha/k mismatch with the profile");
  LimitConstant out;
  for (double R : R_list) {
    if (R > profile.S / 2.0 + 1e-12)
      throw std::invalid_argument("limit_constant: R beyond the trusted region S/2");
    out.R.push_back(R);
    out.F.push_back(profile_gap_integral(profile, R));
  }
  for (size_t i = 0; i + 1 < out.F.size(); ++i)
    if (out.F[i + 1] < out.F[i] * (1.0 - 1e-9))
      throw std::runtime_error("limit_constant: F(R) not monotone nondecreasing");

  const size_t n = out.F.size();
  out.L = out.F.back();
  if (n >= 3) {
    const double d1 = out.F[n - 2] - out.F[n - 3];
    const double d2 = out.F[n - 1] - out.F[n - 2];
    if (d1 > 0.0 && d2 > 0.0 && d2 < d1) {
      const double q = d2 / d1;
      out.L = out.F[n - 1] + d2 * q / (1.0 - q);
    }
  }
  out.tail_margin = out.F[n - 1] - (n >= 2 ? out.F[n - 2] : 0.0);
  return out;
}

BlowUpDistance blowup_distance(const std::function<Complex(const Vec2&)>& field,
                               const LimitProfile& profile, double r1, double r2) {
  if (!(r1 > 0.0 && r2 > r1)) throw std::invalid_argument("blowup_distance: bad annulus");
  PointLocator locator(profile.mesh);
  FieldSampler psi(profile.mesh, locator, profile.nodal);

  const int nr = 24, nt = 96;
  Complex inner(0, 0);
  double psi_norm2 = 0.0, field_norm2 = 0.0;
  std::vector<Complex> wv(nr * nt), pv(nr * nt);
  std::vector<double> wgt(nr * nt);
  int idx = 0;
  for (int i = 0; i < nr; ++i) {
    const double r = r1 + (i + 0.5) * (r2 - r1) / nr;
    for (int j = 0; j < nt; ++j) {
      const double t = 2.0 * kPi * (j + 0.5) / nt;
      const Vec2 x = r * Vec2(std::cos(t), std::sin(t));
      const double w = r * (r2 - r1) / nr * 2.0 * kPi / nt;
      const Complex W = field(x);
      const Complex P = psi.value(x);
      wv[idx] = W;
      pv[idx] = P;
      wgt[idx] = w;
      ++idx;
      inner += w * W * std::conj(P);
      psi_norm2 += w * std::norm(P);
      field_norm2 += w * std::norm(W);
    }
  }
  BlowUpDistance out;
  if (psi_norm2 <= 0.0) throw std::runtime_error("blowup_distance: profile vanishes on annulus");
  out.c = inner / psi_norm2;
  double dist2 = 0.0;
  for (int i = 0; i < idx; ++i) dist2 += wgt[i] * std::norm(wv[i] - out.c * pv[i]);
  const double ref2 = std::norm(out.c) * psi_norm2;
  out.distance = ref2 > 0.0 ? std::sqrt(dist2 / ref2) : std::sqrt(dist2);
  return out;
}

double eigenfunction_gap(const AssembledSystem& sys_a, const Eigen::VectorXcd& nodal_a,
                         const AssembledSystem& sys_0, const Eigen::VectorXcd& nodal_0,
                         double order) {
  const PoleConfig& cfg_a = sys_a.cfg;
  const PoleConfig& cfg_0 = sys_0.cfg;
  if (cfg_0.pole.norm() > 0.0)
    throw std::invalid_argument("eigenfunction_gap: reference must live at pole 0");
  const double abs_a = cfg_a.pole.norm();
  if (abs_a == 0.0) return 0.0;

  PointLocator loc_a(*sys_a.mesh), loc_0(*sys_0.mesh);
  FieldSampler fa(*sys_a.mesh, loc_a, nodal_a);
  FieldSampler f0(*sys_0.mesh, loc_0, nodal_0);

  const double raw = integrate_mesh_with_cut(
      *sys_a.mesh, cfg_a.pole, 4, [&](const Vec2& x, int t, int side) -> double {
        const Eigen::Vector2<Complex> ga = magnetic_gradient(fa, cfg_a, t, x);
        const int t0 = loc_0.locate(x);
        if (t0 < 0) return 0.0;  // roundoff sliver outside the reference mesh
        const Eigen::Vector2<Complex> g0 = magnetic_gradient(f0, cfg_0, t0, x);
        const Complex phase = std::conj(gauge_phase_on_side(cfg_a, x, side));
        return (ga - phase * g0).squaredNorm();
      });
  return raw / std::pow(abs_a, 2.0 * order);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& samples,
                 double noise_floor) {
  std::vector<std::pair<double, double>> usable;
  int dropped = 0;
  for (const auto& [a, diff] : samples) {
    if (std::abs(diff) > noise_floor && a > 0.0)
      usable.emplace_back(a, std::abs(diff));
    else
      ++dropped;
  }
  if (usable.size() < 4)
    throw std::invalid_argument("fit_rate: need at least 4 samples above the noise floor");
  double amin = usable.front().first, amax = amin;
  for (const auto& [a, d] : usable) {
    amin = std::min(amin, a);
    amax = std::max(amax, a);
  }
  if (amax / amin < 4.0 * (1.0 - 1e-9))
    throw std::invalid_argument("fit_rate: samples must span a factor >= 4 in |a|");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(usable.size());
  for (const auto& [a, d] : usable) {
    const double x = std::log(a), y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double ybar = sy / n, xbar = sx / n;
  double ss_res = 0, ss_tot = 0;
  for (const auto& [a, d] : usable) {
    const double y = std::log(d);
    const double yhat = ybar + fit.slope * (std::log(a) - xbar);
    ss_res += (y - yhat) * (y - yhat);
    ss_tot += (y - ybar) * (y - ybar);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.used = n;
  fit.dropped = dropped;
  return fit;
}

double quotient_boundedness(const std::vector<std::pair<double, double>>& samples,
                            double order, double noise_floor) {
  double qmin = std::numeric_limits<double>::max(), qmax = 0.0;
  int usable = 0;
  for (const auto& [a, diff] : samples) {
    if (std::abs(diff) <= noise_floor || a <= 0.0) continue;
    const double q = std::abs(diff) / std::pow(a, 2.0 * order);
    qmin = std::min(qmin, q);
    qmax = std::max(qmax, q);
    ++usable;
  }
  if (usable < 4)
    throw std::invalid_argument("quotient_boundedness: need at least 4 usable samples");
  return qmax / qmin;
}

SweepReport pole_sweep(const Domain& domain, const SweepConfig& config) {
  SweepReport report;
  report.config = config;
  if (config.a_list.empty()) throw std::invalid_argument("pole_sweep: empty |a| list");
  for (size_t i = 0; i + 1 < config.a_list.size(); ++i)
    if (config.a_list[i] <= config.a_list[i + 1])
      throw std::invalid_argument("pole_sweep: |a| list must be strictly decreasing");
  if (std::abs(config.p.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("pole_sweep: direction must be a unit vector");

  const double grading =
      config.grading > 0.0 ? config.grading : default_grading_exponent(config.alpha);

  // reference problem at a = 0
  const Mesh mesh0 = mesh_domain(domain, Vec2(0, 0), config.h_max, grading);
  const PoleConfig cfg0(config.alpha, Vec2(0, 0));
  const AssembledSystem sys0 = assemble(mesh0, cfg0, config.quadrature_order);
  SpectrumSlice slice0 = solve_lowest(sys0, config.solve_count, config.eig_tol);
  if (!check_simplicity(slice0, config.n0, config.rel_gap))
    throw std::runtime_error("pole_sweep: simplicity failure at a = 0");

  EigenPair phi0 = slice0.pairs[config.n0 - 1];
  report.lambda0 = phi0.lambda;
  report.noise_floor = 10.0 * config.eig_tol * report.lambda0;

  PointLocator loc0(mesh0);
  const double r_cap0 = 0.5 * domain.boundary_distance(Vec2(0, 0));
  const double r_floor0 = resolved_radius_floor(mesh0, loc0, Vec2(0, 0), r_cap0);

  // dominant mode and canonical phase of the reference eigenfunction:
  // rotate so that beta_k^0 is a positive real number
  {
    Eigen::VectorXcd nodal0 = sys0.expand(phi0.vector);
    FieldSampler f0(mesh0, loc0, nodal0);
    FourierTrace ft0 = build_fourier_trace(f0, cfg0, r_floor0, r_cap0, 140,
                                           config.mode_window, config.trace_Q);
    BetaTable bt0 = compute_beta_table(ft0, phi0.lambda, config.beta_R_grid);
    VanishingOrder vo0 = vanishing_order(ft0, bt0, 1e-3);
    const Complex rot = std::conj(vo0.beta_k) / std::abs(vo0.beta_k);
    phi0.vector *= rot;
    report.k = vo0.k;
    report.order = vo0.order;
    report.order0 = vo0.order;
    report.beta_k0 = vo0.beta_k * rot;
  }
  const Eigen::VectorXcd nodal0 = sys0.expand(phi0.vector);
  FieldSampler field0(mesh0, loc0, nodal0);

  for (double abs_a : config.a_list) {
    const Vec2 a = abs_a * config.p;
    SweepSample sample;
    sample.abs_a = abs_a;

    const Mesh mesh_a = remesh_for_pole(mesh0, a);
    const PoleConfig cfg_a(config.alpha, a);
    const AssembledSystem sys_a = assemble(mesh_a, cfg_a, config.quadrature_order);
    SpectrumSlice slice = solve_lowest(sys_a, config.solve_count, config.eig_tol);
    if (!check_simplicity(slice, config.n0, config.rel_gap)) {
      std::ostringstream msg;
      msg << "pole_sweep: simplicity failure at |a| = " << abs_a;
      throw std::runtime_error(msg.str());
    }
    EigenPair pair = align_phase(slice.pairs[config.n0 - 1], sys_a, phi0, sys0);
    sample.lambda_a = pair.lambda;
    sample.diff = report.lambda0 - pair.lambda;

    const Eigen::VectorXcd nodal_a = sys_a.expand(pair.vector);
    PointLocator loc_a(mesh_a);
    FieldSampler field_a(mesh_a, loc_a, nodal_a);

    // Fourier structure at the moving pole
    const double r_cap = 0.5 * domain.boundary_distance(a);
    const double r_floor = resolved_radius_floor(mesh_a, loc_a, a, r_cap);
    FourierTrace ft = build_fourier_trace(field_a, cfg_a, r_floor, r_cap, 140,
                                          config.mode_window, config.trace_Q);
    sample.parseval_defect = ft.max_parseval_defect;
    BetaTable bt = compute_beta_table(ft, pair.lambda, config.beta_R_grid);
    const VanishingOrder vo = vanishing_order(ft, bt, 1e-3);
    sample.order_detected = vo.order;
    sample.beta_k = vo.beta_k;
    sample.beta0 = bt.at(0).beta;
    sample.beta1 = bt.at(1).beta;
    sample.beta_spread_leading = std::max(bt.at(0).spread, bt.at(1).spread);
    sample.pole_term_value =
        pole_term(sample.beta0, sample.beta1, a, config.alpha).value;

    // H(phi_a, K|a|) on the origin-centered circle
    {
      const CircleTrace tr = trace_circle(field_a, Vec2(0, 0), config.K * abs_a, 256, 0.0);
      double h = 0.0;
      for (const Complex& s : tr.samples) h += std::norm(s);
      sample.H_K = h * 2.0 * kPi / tr.Q;
      sample.h_ratio = std::pow(abs_a, report.order) / std::sqrt(sample.H_K);
    }

    // Almgren frequency over [4|a|, r_hi]
    {
      const double lo = std::max(4.0 * abs_a, 1.3 * r_floor);
      const double hi = config.almgren_r_hi;
      if (hi > lo * 1.05) {
        std::vector<double> radii;
        const int n = 9;
        for (int i = 0; i < n; ++i)
          radii.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
        const AlmgrenCurve curve = frequency_curve(field_a, pair.lambda, cfg_a, radii);
        sample.n_max_window = *std::max_element(curve.N.begin(), curve.N.end());
      }
    }

    sample.gap = eigenfunction_gap(sys_a, nodal_a, sys0, nodal0, report.order);

    if (config.profile) {
      BlowUpField bu{&field_a, abs_a, report.order};
      const BlowUpDistance bd = blowup_distance(
          [&](const Vec2& x) { return bu(x); }, *config.profile, 1.5, 3.0);
      sample.blowup_dist = bd.distance;
      sample.blowup_c = bd.c;
    }

    sample.hardy_ok = check_hardy(mesh_a, cfg_a, nodal_a, 0.25).holds() &&
                      check_hardy(mesh_a, cfg_a, nodal_a, 0.5).holds();
    sample.poincare_ok = check_poincare(mesh_a, cfg_a, nodal_a, 0.5).holds();

    report.samples.push_back(sample);
  }

  std::vector<std::pair<double, double>> diffs;
  for (const auto& s : report.samples) diffs.emplace_back(s.abs_a, s.diff);
  report.rate = fit_rate(diffs, report.noise_floor);
  report.quotient_spread = quotient_boundedness(diffs, report.order, report.noise_floor);
  return report;
}

}  // namespace abspec
