#include "abspec/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace abspec {

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

bool power_of_two(int q) { return q > 0 && (q & (q - 1)) == 0; }
}  // namespace

CircleTrace trace_circle(const FieldSampler& field, const Vec2& center, double radius,
                         int Q, double theta0) {
  if (!power_of_two(Q) || Q < 64)
    throw std::invalid_argument("trace_circle: Q must be a power of two >= 64");
  if (!(radius > 0.0)) throw std::invalid_argument("trace_circle: radius must be positive");
  CircleTrace trace;
  trace.center = center;
  trace.radius = radius;
  trace.theta0 = theta0;
  trace.Q = Q;
  trace.samples.resize(Q);
  const Mesh& mesh = field.mesh();
  double max_local_diam = 0.0;
  for (int q = 0; q < Q; ++q) {
    const double t = theta0 + 2.0 * kPi * q / Q;
    const Vec2 x = center + radius * Vec2(std::cos(t), std::sin(t));
    const int tri = field.locator().locate(x);
    if (tri < 0) throw std::runtime_error("trace_circle: circle exits the mesh");
    max_local_diam = std::max(max_local_diam, mesh.triangle_diameter(tri));
    trace.samples[q] = field.value_in(tri, x);
  }
  if (radius < 2.0 * max_local_diam)
    throw std::runtime_error("trace_circle: radius under-resolved by the local mesh");
  return trace;
}

FourierModes fourier_modes(const CircleTrace& trace) {
  FourierModes modes;
  modes.Q = trace.Q;
  modes.theta0 = trace.theta0;
  modes.v.resize(trace.Q);
  for (int j = -trace.Q / 2; j < trace.Q / 2; ++j) {
    Complex acc(0, 0);
    for (int q = 0; q < trace.Q; ++q) {
      const double t = trace.theta0 + 2.0 * kPi * q / trace.Q;
      acc += trace.samples[q] * std::polar(1.0, -j * t);
    }
    modes.v[static_cast<size_t>(j + trace.Q / 2)] = kSqrt2Pi / trace.Q * acc;
  }
  return modes;
}

double parseval_defect(const CircleTrace& trace) {
  const FourierModes modes = fourier_modes(trace);
  double lhs = 0.0, rhs = 0.0;
  for (const Complex& v : modes.v) lhs += std::norm(v);
  for (const Complex& s : trace.samples) rhs += std::norm(s);
  rhs *= 2.0 * kPi / trace.Q;
  const double scale = 0.5 * (lhs + rhs);
  return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

Complex FourierTrace::v_interp(int j, double r) const {
  const double nu = std::abs(alpha - j);
  if (r <= radii.front()){
    // below the resolved window: local power law from the innermost point
    return v_at(j, 0) * std::pow(r / radii.front(), nu);
  }
  if (r >= radii.back()) return v_at(j, static_cast<int>(radii.size()) - 1);
  auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const int i1 = static_cast<int>(it - radii.begin());
  const int i0 = i1 - 1;
  // interpolate the slowly varying ratio v_j / r^nu linearly in log r
  const double u = (std::log(r) - std::log(radii[i0])) /
                   (std::log(radii[i1]) - std::log(radii[i0]));
  const Complex g0 = v_at(j, i0) / std::pow(radii[i0], nu);
  const Complex g1 = v_at(j, i1) / std::pow(radii[i1], nu);
  return ((1.0 - u) * g0 + u * g1) * std::pow(r, nu);
}

FourierTrace build_fourier_trace(const FieldSampler& field, const PoleConfig& cfg,
                                 double r_min, double r_max, int n_radii, int J, int Q) {
  if (!(r_min > 0.0 && r_max > r_min))
    throw std::invalid_argument("build_fourier_trace: need 0 < r_min < r_max");
  if (n_radii < 8) throw std::invalid_argument("build_fourier_trace: n_radii too small");
  FourierTrace ft;
  ft.center = cfg.pole;
  ft.theta0 = cfg.direction_angle;
  ft.alpha = cfg.alpha;
  ft.J = J;
  ft.radii.resize(n_radii);
  const double lr0 = std::log(r_min), lr1 = std::log(r_max);
  for (int i = 0; i < n_radii; ++i)
    ft.radii[i] = std::exp(lr0 + (lr1 - lr0) * i / (n_radii - 1));
  ft.radii.front() = r_min;
  ft.radii.back() = r_max;
  ft.v.resize(2 * J + 1, n_radii);
  for (int i = 0; i < n_radii; ++i) {
    const CircleTrace trace = trace_circle(field, cfg.pole, ft.radii[i], Q, ft.theta0);
    ft.max_parseval_defect = std::max(ft.max_parseval_defect, parseval_defect(trace));
    for (int j = -J; j <= J; ++j) {
      Complex acc(0, 0);
      for (int q = 0; q < Q; ++q) {
        const double t = ft.theta0 + 2.0 * kPi * q / Q;
        acc += trace.samples[q] * std::polar(1.0, -j * t);
      }
      ft.v(j + J, i) = kSqrt2Pi / Q * acc;
    }
  }
  return ft;
}

namespace {

// trapezoid in log s of f(s) ds over the trace grid restricted to [ra, rb]
Complex integrate_modes(const FourierTrace& ft, int j, double ra, double rb,
                        const std::function<Complex(double, const Complex&)>& f) {
  // collect nodes: grid points in (ra, rb) plus the exact endpoints
  std::vector<double> s;
  s.push_back(ra);
  for (double r : ft.radii)
    if (r > ra * (1 + 1e-12) && r < rb * (1 - 1e-12)) s.push_back(r);
  s.push_back(rb);
  Complex acc(0, 0);
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double h = s[i + 1] - s[i];
    const Complex fa = f(s[i], ft.v_interp(j, s[i]));
    const Complex fb = f(s[i + 1], ft.v_interp(j, s[i + 1]));
    acc += 0.5 * h * (fa + fb);
  }
  return acc;
}

}  // namespace

BetaResult beta_coefficient(const FourierTrace& ft, int j, double lambda,
                            const std::vector<double>& R_grid, const BetaOptions& opt) {
  if (std::abs(j) > ft.J) throw std::invalid_argument("beta_coefficient: mode outside window");
  const double nu = std::abs(ft.alpha - j);
  const double r0 = ft.radii.front();

  // local power-law coefficient from the innermost resolved decade
  Complex beta_fit(0, 0);
  {
    int count = 0;
    for (size_t i = 0; i < ft.radii.size() && ft.radii[i] <= 2.0 * r0; ++i, ++count)
      beta_fit += ft.v_at(j, static_cast<int>(i)) / std::pow(ft.radii[i], nu);
    beta_fit /= static_cast<double>(count);
  }

  std::vector<Complex> betas;
  for (double R : R_grid) {
    if (R > ft.radii.back() * (1 + 1e-9) || R < r0)
      throw std::invalid_argument("beta_coefficient: R outside the trace window");
    const double Rnu = std::pow(R, nu);
    Complex b = ft.v_interp(j, R) / Rnu;
    // core contribution with v ~ beta_fit s^nu:
    //   ∫_0^{r0} (s^{1-nu} - s^{1+nu}/R^{2nu}) beta_fit s^nu ds
    const Complex core =
        beta_fit * (r0 * r0 / 2.0 - std::pow(r0, 2.0 + 2.0 * nu) /
                                        ((2.0 + 2.0 * nu) * Rnu * Rnu));
    const Complex rest = integrate_modes(
        ft, j, r0, R, [&](double s, const Complex& v) -> Complex {
          return (std::pow(s, 1.0 - nu) - std::pow(s, 1.0 + nu) / (Rnu * Rnu)) * v;
        });
    b += lambda / (2.0 * nu) * (core + rest);
    betas.push_back(b);
  }

  Complex mean(0, 0);
  for (const Complex& b : betas) mean += b;
  mean /= static_cast<double>(betas.size());
  double dev = 0.0;
  for (const Complex& b : betas) dev = std::max(dev, std::abs(b - mean));

  BetaResult res;
  res.beta = mean;
  if (std::abs(mean) <= opt.zero_floor) {
    res.zero_flagged = true;
    res.beta = Complex(0, 0);
    res.spread = 0.0;
    return res;
  }
  res.spread = dev / std::abs(mean);
  if (opt.throw_on_spread && res.spread > opt.spread_tol)
    throw std::runtime_error(
        "beta_coefficient: R-dependence above tolerance (under-resolution or wrong lambda)");
  return res;
}

BetaTable compute_beta_table(const FourierTrace& ft, double lambda,
                             const std::vector<double>& R_grid,
                             double relative_zero_floor) {
  BetaTable table;
  table.alpha = ft.alpha;
  table.J = ft.J;
  BetaOptions pass1;
  pass1.throw_on_spread = false;
  double bmax = 0.0;
  std::vector<BetaResult> raw;
  for (int j = -ft.J; j <= ft.J; ++j) {
    raw.push_back(beta_coefficient(ft, j, lambda, R_grid, pass1));
    bmax = std::max(bmax, std::abs(raw.back().beta));
  }
  for (auto& r : raw) {
    if (std::abs(r.beta) < relative_zero_floor * bmax) {
      r.zero_flagged = true;
      r.beta = Complex(0, 0);
      r.spread = 0.0;
    }
    table.rows.push_back(r);
  }
  return table;
}

VanishingOrder vanishing_order(const FourierTrace& ft, const BetaTable& table,
                               double threshold) {
  double bmax = 0.0;
  for (const auto& r : table.rows) bmax = std::max(bmax, std::abs(r.beta));
  if (bmax <= 0.0) throw std::runtime_error("vanishing_order: degenerate field (all modes zero)");
  VanishingOrder out;
  double best = std::numeric_limits<double>::max();
  bool found = false;
  for (int j = -table.J; j <= table.J; ++j) {
    const auto& row = table.at(j);
    if (row.zero_flagged || std::abs(row.beta) <= threshold * bmax) continue;
    const double nu = std::abs(table.alpha - j);
    if (nu < best) {
      best = nu;
      out.k = j;
      out.beta_k = row.beta;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("vanishing_order: no mode above threshold");
  out.order = best;

  // log-log slope of |v_k(r)| as a consistency diagnostic
  const int n = static_cast<int>(ft.radii.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(ft.v_at(out.k, i));
    if (m <= 0.0) continue;
    const double x = std::log(ft.radii[i]), y = std::log(m);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) out.loglog_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return out;
}

Complex reconstruct_expansion(const FourierModes& modes, double t, int J_trunc) {
  Complex acc(0, 0);
  const int jlo = std::max(-modes.Q / 2, -J_trunc);
  const int jhi = std::min(modes.Q / 2 - 1, J_trunc);
  for (int j = jlo; j <= jhi; ++j) acc += modes.at(j) * std::polar(1.0, j * t);
  return acc / kSqrt2Pi;
}

Complex reconstruct_expansion(const FourierTrace& ft, double r, double t, int J_trunc) {
  Complex acc(0, 0);
  const int J = std::min(ft.J, J_trunc);
  for (int j = -J; j <= J; ++j) acc += ft.v_interp(j, r) * std::polar(1.0, j * t);
  return acc / kSqrt2Pi;
}

}  // namespace abspec
