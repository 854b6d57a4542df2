#include "doctest.h"

#include <cmath>
#include <functional>
#include <memory>

#include "abspec/almgren.hpp"
#include "abspec/oracle_disk.hpp"

using namespace abspec;

namespace {

struct MeshedField {
  Mesh mesh;
  std::unique_ptr<PointLocator> locator;
  Eigen::VectorXcd nodal;
  std::unique_ptr<FieldSampler> field;
};

MeshedField make_field(double h, double grading,
                       const std::function<Complex(const Vec2&)>& f) {
  MeshedField out;
  const Domain dom = make_disk_domain(1.0, suggested_boundary_count(1.0, h, grading));
  out.mesh = mesh_domain(dom, Vec2(0, 0), h, grading);
  out.locator = std::make_unique<PointLocator>(out.mesh);
  out.nodal.resize(out.mesh.num_vertices());
  for (int v = 0; v < out.mesh.num_vertices(); ++v) out.nodal[v] = f(out.mesh.vertices[v]);
  out.field = std::make_unique<FieldSampler>(out.mesh, *out.locator, out.nodal);
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("frequency of homogeneous profiles") {
  const double alpha = 0.3;
  const PoleConfig cfg(alpha, Vec2(0, 0));
  for (int k : {0, 1}) {
    const double nu = std::abs(alpha - k);
    const MeshedField f = make_field(
        0.03, 5.0, [&](const Vec2& x) { return psi_profile(alpha, k, x); });
    const AlmgrenCurve curve =
        frequency_curve(*f.field, 0.0, cfg, log_grid(0.1, 0.5, 33));

    for (size_t i = 0; i < curve.radii.size(); ++i) {
      const double r = curve.radii[i];
      // closed forms: H = r^{2 nu}, E = nu r^{2 nu}
      CHECK(curve.H[i] == doctest::Approx(std::pow(r, 2 * nu)).epsilon(5e-3));
      CHECK(curve.E[i] == doctest::Approx(nu * std::pow(r, 2 * nu)).epsilon(5e-3));
      CHECK(std::abs(curve.N[i] - nu) < 0.02);
    }

    const double defect = dH_identity_check(curve);
    INFO("k = ", k, " defect = ", defect);
    CHECK(defect < 1e-3);

    CHECK(frequency_bound_check(curve, nu, 0.05, 0.1, 0.5));
    CHECK_FALSE(frequency_bound_check(curve, nu - 0.5, 0.05, 0.1, 0.5));
    CHECK_THROWS_AS(frequency_bound_check(curve, nu, 0.05, 0.6, 0.9),
                    std::invalid_argument);
  }
}

TEST_CASE("identity defect shrinks under mesh refinement") {
  const double alpha = 0.3;
  const PoleConfig cfg(alpha, Vec2(0, 0));
  double prev = 1e300;
  for (double h : {0.08, 0.04}) {
    const MeshedField f =
        make_field(h, 5.0, [&](const Vec2& x) { return psi_profile(alpha, 0, x); });
    const AlmgrenCurve curve =
        frequency_curve(*f.field, 0.0, cfg, log_grid(0.1, 0.5, 33));
    const double defect = dH_identity_check(curve);
    CHECK(defect < prev);
    prev = defect;
  }
}

TEST_CASE("oracle ground state frequency approaches alpha") {
  const double alpha = 0.3;
  const DiskEigenTable table = disk_spectrum(alpha, 1);
  const DiskEigenFunction gs = disk_eigenfunction(alpha, table.entries[0]);
  const MeshedField f = make_field(0.03, default_grading_exponent(alpha),
                                   [&](const Vec2& x) { return gs(x); });
  const PoleConfig cfg(alpha, Vec2(0, 0));

  const AlmgrenCurve curve = frequency_curve(
      *f.field, table.entries[0].lambda, cfg, log_grid(0.1, 0.5, 33));
  const double defect = dH_identity_check(curve);
  INFO("identity defect = ", defect);
  CHECK(defect < 0.02);

  // N decreasing toward alpha and the small-radius limit
  const AlmgrenCurve small = frequency_curve(
      *f.field, table.entries[0].lambda, cfg, log_grid(0.05, 0.3, 9));
  for (size_t i = 0; i < small.radii.size(); ++i) CHECK(small.H[i] > 0.0);
  CHECK(std::abs(small.N.front() - alpha) < 0.05);
  CHECK(frequency_bound_check(small, alpha, 0.1, 0.05, 0.3));
}

TEST_CASE("pole term formula and bound") {
  const PoleTerm t1 = pole_term(Complex(2, 1), Complex(0, 0), Vec2(0.1, 0), 0.3);
  CHECK(t1.value == 0.0);

  const double a = 0.07;
  const PoleTerm t2 = pole_term(Complex(1, 0), Complex(1, 0), Vec2(a, 0), 0.3);
  CHECK(t2.value == doctest::Approx(2.0 * 0.3 * 0.7 * a).epsilon(1e-14));

  // |M| <= 2 alpha (1-alpha) |a| |b0||b1| over a deterministic sample sweep
  uint64_t state = 88172645463325252ull;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return (state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  for (int i = 0; i < 200; ++i) {
    const Complex b0(next(), next()), b1(next(), next());
    const Vec2 av(0.2 * next(), 0.2 * next());
    const PoleTerm t = pole_term(b0, b1, av, 0.3);
    CHECK(std::abs(t.value) <= t.bound * (1.0 + 1e-12));
  }
}
