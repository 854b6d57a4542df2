#include "doctest.h"

#include <cmath>
#include <complex>

#include "abspec/assembly.hpp"
#include "abspec/oracle_disk.hpp"

using namespace abspec;

namespace {
Eigen::VectorXcd interpolate_nodal(const Mesh& mesh,
                                   const std::function<Complex(const Vec2&)>& f) {
  Eigen::VectorXcd nodal(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) nodal[v] = f(mesh.vertices[v]);
  return nodal;
}
}  // namespace

TEST_CASE("assembled system structure") {
  const Domain dom = make_disk_domain(1.0, 64);
  const Mesh mesh = mesh_domain(dom, Vec2(0, 0), 0.1, 3.0);
  const PoleConfig cfg(0.3, Vec2(0, 0));
  const AssembledSystem sys = assemble(mesh, cfg, 4);

  CHECK(sys.dim() == mesh.num_vertices() - 64 - 1);

  // Hermiticity, entrywise exact up to 1e-12 of the largest entry
  double max_abs = 0.0, max_defect = 0.0;
  for (int k = 0; k < sys.stiffness.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(sys.stiffness, k); it; ++it) {
      max_abs = std::max(max_abs, std::abs(it.value()));
      max_defect = std::max(
          max_defect, std::abs(it.value() - std::conj(sys.stiffness.coeff(it.col(), it.row()))));
    }
  CHECK(max_defect < 1e-12 * max_abs);

  CHECK_THROWS_AS(assemble(mesh, cfg, 3), std::invalid_argument);
  CHECK_THROWS_AS(assemble(mesh, PoleConfig(0.3, Vec2(0.1, 0)), 4), std::invalid_argument);
}

TEST_CASE("apply_operator basics") {
  const Domain dom = make_disk_domain(1.0, 64);
  const Mesh mesh = mesh_domain(dom, Vec2(0, 0), 0.12, 2.0);
  const PoleConfig cfg(0.3, Vec2(0, 0));
  const AssembledSystem sys = assemble(mesh, cfg, 4);

  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(sys.dim());
  CHECK(apply_operator(sys, zero).norm() == 0.0);

  Eigen::VectorXcd u(sys.dim()), v(sys.dim());
  for (int i = 0; i < sys.dim(); ++i) {
    u[i] = Complex(std::sin(0.1 * i), std::cos(0.2 * i));
    v[i] = Complex(std::cos(0.3 * i), std::sin(0.05 * i));
  }
  const Complex a(0.7, -0.4), b(-1.1, 0.2);
  const Eigen::VectorXcd lhs = apply_operator(sys, (a * u + b * v).eval());
  const Eigen::VectorXcd rhs = a * apply_operator(sys, u) + b * apply_operator(sys, v);
  CHECK((lhs - rhs).norm() < 1e-13 * (lhs.norm() + rhs.norm()));

  CHECK_THROWS_AS(apply_operator(sys, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}

TEST_CASE("nonnegativity and the Hardy floor for psi_0") {
  const Domain dom = make_disk_domain(1.0, 64);
  const Mesh mesh = mesh_domain(dom, Vec2(0, 0), 0.1, 3.0);
  const PoleConfig cfg(0.3, Vec2(0, 0));
  const AssembledSystem sys = assemble(mesh, cfg, 4);

  const Eigen::VectorXcd nodal =
      interpolate_nodal(mesh, [&](const Vec2& x) { return psi_profile(0.3, 0, x); });
  const Eigen::VectorXcd u = sys.restrict_nodal(nodal);
  const Complex num = u.dot(sys.stiffness * u);
  const Complex den = u.dot(sys.mass.cast<Complex>() * u);
  const double rq = num.real() / den.real();
  CHECK(num.imag() < 1e-10 * std::abs(num));
  CHECK(rq >= 0.09);  // mu_1 = min(alpha^2, (1-alpha)^2)
  CHECK(rq >= 0.0);

  // phase-constant gauge covariance of the form
  const Complex c = std::polar(1.0, 0.8342);
  const Complex rot = (c * u).dot(sys.stiffness * (c * u));
  CHECK(std::abs(rot - num) < 1e-12 * std::abs(num));
}

TEST_CASE("Hardy and Poincare inequalities for the oracle field") {
  const Domain dom = make_disk_domain(1.0, 96);
  const Mesh mesh = mesh_domain(dom, Vec2(0, 0), 0.07, 4.0);
  const PoleConfig cfg(0.3, Vec2(0, 0));

  const DiskEigenTable table = disk_spectrum(0.3, 1);
  const DiskEigenFunction f = disk_eigenfunction(0.3, table.entries[0]);
  const Eigen::VectorXcd nodal =
      interpolate_nodal(mesh, [&](const Vec2& x) { return f(x); });

  for (double r : {0.25, 0.5}) {
    const HardyCheck h = check_hardy(mesh, cfg, nodal, r);
    INFO("r = ", r, " lhs = ", h.lhs, " bound = ", h.bound);
    CHECK(h.holds(0.05));
  }
  const PoincareCheck p = check_poincare(mesh, cfg, nodal, 0.5);
  INFO("lhs = ", p.lhs, " bound = ", p.bound);
  CHECK(p.holds(0.05));
}

TEST_CASE("galerkin eigenvalue upper bound decreases under refinement") {
  const Domain dom = make_disk_domain(1.0, 96);
  const PoleConfig cfg(0.3, Vec2(0, 0));
  const DiskEigenTable oracle = disk_spectrum(0.3, 1);

  double prev = std::numeric_limits<double>::max();
  for (double h : {0.14, 0.1, 0.07}) {
    const Mesh mesh = mesh_domain(dom, Vec2(0, 0), h, 4.0);
    const AssembledSystem sys = assemble(mesh, cfg, 4);
    // smallest Rayleigh quotient over a few inverse-power steps would do;
    // use the solver-quality bound instead via a crude Lanczos-free probe:
    // the smallest Ritz value of a random-subspace projection is an upper
    // bound for lambda_1 only after minimization, so simply use the
    // interpolant of the oracle ground state as a trial function.
    const DiskEigenFunction f = disk_eigenfunction(0.3, oracle.entries[0]);
    Eigen::VectorXcd nodal = interpolate_nodal(mesh, [&](const Vec2& x) { return f(x); });
    const Eigen::VectorXcd u = sys.restrict_nodal(nodal);
    const double rq = std::real(u.dot(sys.stiffness * u)) /
                      std::real(u.dot(sys.mass.cast<Complex>() * u));
    CHECK(rq >= oracle.entries[0].lambda * (1.0 - 1e-10));
    CHECK(rq <= prev * (1.0 + 1e-12));
    prev = rq;
  }
  // and the trial quotient is already within a few percent at h = 0.07
  CHECK(prev <= oracle.entries[0].lambda * 1.05);
}
