#pragma once

#include <complex>
#include <vector>

#include "abspec/geometry.hpp"

namespace abspec {

using Complex = std::complex<double>;

/// Symmetric Gauss rule on the reference triangle (barycentric nodes,
/// weights summing to 1).
struct TriQuadRule {
  int n = 0;
  const double* bary = nullptr;  // 3 coordinates per node
  const double* w = nullptr;
};

/// Rules exact for polynomials of the given total degree (4 or 6).
const TriQuadRule& triangle_rule(int degree);

struct QuadPoint {
  Vec2 x;
  double w;
};

/// Physical quadrature points for the triangle (a, b, c).
void append_triangle_quad(std::vector<QuadPoint>& out, const Vec2& a, const Vec2& b,
                          const Vec2& c, const TriQuadRule& rule);

/// Fan-triangulates a convex polygon and appends quadrature points.
void append_polygon_quad(std::vector<QuadPoint>& out, const std::vector<Vec2>& poly,
                         const TriQuadRule& rule);

/// Convex polygon approximating poly ∩ disk(center, r); boundary arcs are
/// replaced by subdivided chords (error O(arc^3) per element). Input polygon
/// must be convex and counterclockwise. Empty result if disjoint.
std::vector<Vec2> clip_polygon_disk(const std::vector<Vec2>& poly, const Vec2& center,
                                    double r);

/// Splits a convex polygon by the oriented line through p0 with direction d.
/// positive = { x : cross(d, x - p0) >= 0 }, negative = the rest.
void split_polygon_by_line(const std::vector<Vec2>& poly, const Vec2& p0, const Vec2& d,
                           std::vector<Vec2>& positive, std::vector<Vec2>& negative);

/// True if segment [s0, s1] intersects the (closed) triangle.
bool segment_intersects_triangle(const Vec2& s0, const Vec2& s1, const Vec2& a,
                                 const Vec2& b, const Vec2& c);

/// Piecewise-linear complex field over a mesh with nodal values for every
/// vertex (constrained vertices carry their boundary values / zeros).
class FieldSampler {
 public:
  FieldSampler(const Mesh& mesh, const PointLocator& locator,
               const Eigen::VectorXcd& nodal);

  Complex value(const Vec2& x) const;
  Complex value_in(int tri, const Vec2& x) const;
  /// Gradient of the P1 interpolant (constant per element).
  Eigen::Vector2<Complex> gradient_in(int tri) const;

  const Mesh& mesh() const { return *mesh_; }
  const PointLocator& locator() const { return *locator_; }
  const Eigen::VectorXcd& nodal() const { return *nodal_; }

 private:
  const Mesh* mesh_;
  const PointLocator* locator_;
  const Eigen::VectorXcd* nodal_;
};

/// Gradients of the three barycentric basis functions on triangle t.
std::array<Vec2, 3> p1_basis_gradients(const Mesh& mesh, int t);

/// Integral of f(x, tri) over the whole mesh.
template <class F>
auto integrate_mesh(const Mesh& mesh, int degree, F&& f) {
  const TriQuadRule& rule = triangle_rule(degree);
  decltype(f(Vec2(), 0) * 1.0) acc{};
  std::vector<QuadPoint> pts;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    pts.clear();
    const auto& tr = mesh.triangles[t];
    append_triangle_quad(pts, mesh.vertices[tr[0]], mesh.vertices[tr[1]],
                         mesh.vertices[tr[2]], rule);
    for (const auto& qp : pts) acc += qp.w * f(qp.x, t);
  }
  return acc;
}

/// Integral of f(x, tri) over mesh ∩ disk(center, r); elements cut by the
/// circle are clipped with the arc replaced by subdivided chords.
template <class F>
auto integrate_mesh_disk(const Mesh& mesh, const Vec2& center, double r, int degree,
                         F&& f) {
  const TriQuadRule& rule = triangle_rule(degree);
  decltype(f(Vec2(), 0) * 1.0) acc{};
  std::vector<QuadPoint> pts;
  std::vector<Vec2> tri(3), clipped;
  const double r2 = r * r;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) tri[k] = mesh.vertices[tr[k]];
    int in_count = 0;
    for (int k = 0; k < 3; ++k) in_count += (tri[k] - center).squaredNorm() <= r2;
    pts.clear();
    if (in_count == 3) {
      append_triangle_quad(pts, tri[0], tri[1], tri[2], rule);
    } else {
      clipped = clip_polygon_disk(tri, center, r);
      if (clipped.empty()) continue;
      append_polygon_quad(pts, clipped, rule);
    }
    for (const auto& qp : pts) acc += qp.w * f(qp.x, t);
  }
  return acc;
}

/// Integral of f(x, tri, side) over the mesh where side = +1/-1 labels the
/// side of the cut line through the origin along `cut_end` for elements the
/// segment [0, cut_end] crosses, and 0 elsewhere. Used for integrands
/// carrying the gauge phase, which jumps across the cut.
template <class F>
auto integrate_mesh_with_cut(const Mesh& mesh, const Vec2& cut_end, int degree, F&& f) {
  const TriQuadRule& rule = triangle_rule(degree);
  decltype(f(Vec2(), 0, 0) * 1.0) acc{};
  const Vec2 origin(0, 0);
  const bool has_cut = cut_end.norm() > 0.0;
  std::vector<QuadPoint> pts;
  std::vector<Vec2> tri(3), pos, neg;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) tri[k] = mesh.vertices[tr[k]];
    if (has_cut && segment_intersects_triangle(origin, cut_end, tri[0], tri[1], tri[2])) {
      split_polygon_by_line(tri, origin, cut_end, pos, neg);
      pts.clear();
      append_polygon_quad(pts, pos, rule);
      for (const auto& qp : pts) acc += qp.w * f(qp.x, t, +1);
      pts.clear();
      append_polygon_quad(pts, neg, rule);
      for (const auto& qp : pts) acc += qp.w * f(qp.x, t, -1);
    } else {
      pts.clear();
      append_triangle_quad(pts, tri[0], tri[1], tri[2], rule);
      for (const auto& qp : pts) acc += qp.w * f(qp.x, t, 0);
    }
  }
  return acc;
}

}  // namespace abspec
