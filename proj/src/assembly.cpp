#include "abspec/assembly.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace abspec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Eigen::VectorXcd AssembledSystem::expand(const Eigen::VectorXcd& free_values) const {
  if (free_values.size() != dim())
    throw std::invalid_argument("AssembledSystem::expand: size mismatch");
  Eigen::VectorXcd nodal = Eigen::VectorXcd::Zero(mesh->num_vertices());
  for (int i = 0; i < dim(); ++i) nodal[free_to_vertex[i]] = free_values[i];
  return nodal;
}

Eigen::VectorXcd AssembledSystem::restrict_nodal(const Eigen::VectorXcd& nodal) const {
  if (nodal.size() != mesh->num_vertices())
    throw std::invalid_argument("AssembledSystem::restrict_nodal: size mismatch");
  Eigen::VectorXcd out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = nodal[free_to_vertex[i]];
  return out;
}

AssembledSystem assemble(const Mesh& mesh, const PoleConfig& cfg, int quadrature_order) {
  if (quadrature_order < 4 || quadrature_order > 6)
    throw std::invalid_argument("assemble: quadrature_order must lie in [4, 6]");
  if ((mesh.pole() - cfg.pole).norm() > 1e-13 * (1.0 + cfg.pole.norm()))
    throw std::invalid_argument("assemble: mesh pole vertex does not match cfg.pole");

  const int nv = mesh.num_vertices();
  AssembledSystem sys;
  sys.cfg = cfg;
  sys.mesh = &mesh;
  sys.quadrature_order = quadrature_order;

  std::vector<char> constrained(nv, 0);
  for (int b : mesh.boundary_vertices) constrained[b] = 1;
  constrained[mesh.pole_vertex] = 1;
  sys.vertex_to_free.assign(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (!constrained[v]) {
      sys.vertex_to_free[v] = static_cast<int>(sys.free_to_vertex.size());
      sys.free_to_vertex.push_back(v);
    }

  std::vector<Eigen::Triplet<Complex>> kt_full;
  std::vector<Eigen::Triplet<Complex>> kt;
  std::vector<Eigen::Triplet<double>> mt;
  kt_full.reserve(9 * mesh.num_triangles());
  kt.reserve(9 * mesh.num_triangles());
  mt.reserve(9 * mesh.num_triangles());

  std::vector<QuadPoint> pts;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tr = mesh.triangles[t];
    const bool pole_adjacent = tr[0] == mesh.pole_vertex || tr[1] == mesh.pole_vertex ||
                               tr[2] == mesh.pole_vertex;
    const TriQuadRule& rule = triangle_rule(pole_adjacent ? 6 : quadrature_order);
    const auto grads = p1_basis_gradients(mesh, t);

    double k_re[3][3] = {};
    double k_im[3][3] = {};
    double m_loc[3][3] = {};
    pts.clear();
    append_triangle_quad(pts, mesh.vertices[tr[0]], mesh.vertices[tr[1]],
                         mesh.vertices[tr[2]], rule);
    int q = 0;
    for (const auto& qp : pts) {
      const Vec2 A = vector_potential(cfg, qp.x);
      const double A2 = A.squaredNorm();
      const double* bary = rule.bary + 3 * q;
      ++q;
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
          const double gg = grads[i].dot(grads[j]);
          const double ll = bary[i] * bary[j];
          k_re[i][j] += qp.w * (gg + A2 * ll);
          // imaginary part: A . (phi_i grad phi_j - phi_j grad phi_i)
          k_im[i][j] += qp.w * (bary[i] * A.dot(grads[j]) - bary[j] * A.dot(grads[i]));
          m_loc[i][j] += qp.w * ll;
        }
      }
    }

    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const Complex kij(k_re[i][j], k_im[i][j]);
        const int vi = tr[i], vj = tr[j];
        kt_full.emplace_back(vi, vj, kij);
        if (j != i) kt_full.emplace_back(vj, vi, std::conj(kij));
        const int fi = sys.vertex_to_free[vi], fj = sys.vertex_to_free[vj];
        if (fi >= 0 && fj >= 0) {
          kt.emplace_back(fi, fj, kij);
          mt.emplace_back(fi, fj, m_loc[i][j]);
          if (j != i) {
            kt.emplace_back(fj, fi, std::conj(kij));
            mt.emplace_back(fj, fi, m_loc[i][j]);
          }
        }
      }
    }
  }

  const int nf = sys.dim();
  sys.stiffness.resize(nf, nf);
  sys.stiffness.setFromTriplets(kt.begin(), kt.end());
  sys.mass.resize(nf, nf);
  sys.mass.setFromTriplets(mt.begin(), mt.end());
  sys.stiffness_full.resize(nv, nv);
  sys.stiffness_full.setFromTriplets(kt_full.begin(), kt_full.end());
  return sys;
}

Eigen::VectorXcd apply_operator(const AssembledSystem& sys, const Eigen::VectorXcd& u) {
  if (u.size() != sys.dim()) throw std::invalid_argument("apply_operator: size mismatch");
  return sys.stiffness * u;
}

void dump_matrix(const Eigen::SparseMatrix<Complex>& m, std::ostream& out) {
  char buf[160];
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n", long(it.row()), long(it.col()),
                    it.value().real(), it.value().imag());
      out << buf;
    }
}

Eigen::Vector2<Complex> magnetic_gradient(const FieldSampler& field, const PoleConfig& cfg,
                                          int tri, const Vec2& x) {
  const Eigen::Vector2<Complex> grad = field.gradient_in(tri);
  const Complex u = field.value_in(tri, x);
  const Vec2 A = vector_potential(cfg, x);
  const Complex I(0.0, 1.0);
  Eigen::Vector2<Complex> g;
  g.x() = I * grad.x() + A.x() * u;
  g.y() = I * grad.y() + A.y() * u;
  return g;
}

HardyCheck check_hardy(const Mesh& mesh, const PoleConfig& cfg,
                       const Eigen::VectorXcd& nodal, double r) {
  PointLocator locator(mesh);
  FieldSampler field(mesh, locator, nodal);
  const double lhs = integrate_mesh_disk(mesh, cfg.pole, r, 6, [&](const Vec2& x, int t) {
    const double d2 = (x - cfg.pole).squaredNorm();
    return std::norm(field.value_in(t, x)) / d2;
  });
  const double energy = integrate_mesh_disk(mesh, cfg.pole, r, 6, [&](const Vec2& x, int t) {
    return magnetic_gradient(field, cfg, t, x).squaredNorm();
  });
  double best = std::numeric_limits<double>::max();
  for (int j = -2; j <= 2; ++j) best = std::min(best, std::abs(j - cfg.alpha));
  HardyCheck c;
  c.lhs = lhs;
  c.bound = energy / (best * best);
  return c;
}

PoincareCheck check_poincare(const Mesh& mesh, const PoleConfig& cfg,
                             const Eigen::VectorXcd& nodal, double r) {
  PointLocator locator(mesh);
  FieldSampler field(mesh, locator, nodal);
  const Vec2 origin(0, 0);
  const double mass = integrate_mesh_disk(mesh, origin, r, 6, [&](const Vec2& x, int t) {
    return std::norm(field.value_in(t, x));
  });
  const double energy = integrate_mesh_disk(mesh, origin, r, 6, [&](const Vec2& x, int t) {
    return magnetic_gradient(field, cfg, t, x).squaredNorm();
  });
  // boundary mass by trapezoid sampling of the circle
  const int nq = 512;
  double boundary = 0.0;
  for (int q = 0; q < nq; ++q) {
    const double t = 2.0 * kPi * q / nq;
    const Vec2 x = origin + r * Vec2(std::cos(t), std::sin(t));
    boundary += std::norm(field.value(x));
  }
  boundary *= 2.0 * kPi * r / nq;
  PoincareCheck c;
  c.lhs = mass / (r * r);
  c.bound = boundary / r + energy;
  return c;
}

}  // namespace abspec
