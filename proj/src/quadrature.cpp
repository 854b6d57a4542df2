#include "abspec/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace abspec {

namespace {

// Dunavant symmetric rules.
const double kBary4[18] = {
    0.816847572980459, 0.091576213509771, 0.091576213509771,
    0.091576213509771, 0.816847572980459, 0.091576213509771,
    0.091576213509771, 0.091576213509771, 0.816847572980459,
    0.108103018168070, 0.445948490915965, 0.445948490915965,
    0.445948490915965, 0.108103018168070, 0.445948490915965,
    0.445948490915965, 0.445948490915965, 0.108103018168070};
const double kW4[6] = {0.109951743655322, 0.109951743655322, 0.109951743655322,
                       0.223381589678011, 0.223381589678011, 0.223381589678011};

const double kBary6[36] = {
    0.873821971016996, 0.063089014491502, 0.063089014491502,
    0.063089014491502, 0.873821971016996, 0.063089014491502,
    0.063089014491502, 0.063089014491502, 0.873821971016996,
    0.501426509658179, 0.249286745170910, 0.249286745170910,
    0.249286745170910, 0.501426509658179, 0.249286745170910,
    0.249286745170910, 0.249286745170910, 0.501426509658179,
    0.636502499121399, 0.310352451033785, 0.053145049844816,
    0.636502499121399, 0.053145049844816, 0.310352451033785,
    0.310352451033785, 0.636502499121399, 0.053145049844816,
    0.310352451033785, 0.053145049844816, 0.636502499121399,
    0.053145049844816, 0.636502499121399, 0.310352451033785,
    0.053145049844816, 0.310352451033785, 0.636502499121399};
const double kW6[12] = {0.050844906370207, 0.050844906370207, 0.050844906370207,
                        0.116786275726379, 0.116786275726379, 0.116786275726379,
                        0.082851075618374, 0.082851075618374, 0.082851075618374,
                        0.082851075618374, 0.082851075618374, 0.082851075618374};

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

const TriQuadRule& triangle_rule(int degree) {
  static const TriQuadRule rule4{6, kBary4, kW4};
  static const TriQuadRule rule6{12, kBary6, kW6};
  if (degree <= 4) return rule4;
  return rule6;
}

void append_triangle_quad(std::vector<QuadPoint>& out, const Vec2& a, const Vec2& b,
                          const Vec2& c, const TriQuadRule& rule) {
  const double area = 0.5 * cross2(b - a, c - a);
  if (!(area > 0.0)) return;  // degenerate slivers contribute nothing
  for (int q = 0; q < rule.n; ++q) {
    const double l0 = rule.bary[3 * q], l1 = rule.bary[3 * q + 1], l2 = rule.bary[3 * q + 2];
    out.push_back({l0 * a + l1 * b + l2 * c, rule.w[q] * area});
  }
}

void append_polygon_quad(std::vector<QuadPoint>& out, const std::vector<Vec2>& poly,
                         const TriQuadRule& rule) {
  for (size_t k = 1; k + 1 < poly.size(); ++k)
    append_triangle_quad(out, poly[0], poly[k], poly[k + 1], rule);
}

std::vector<Vec2> clip_polygon_disk(const std::vector<Vec2>& poly, const Vec2& center,
                                    double r) {
  const int n = static_cast<int>(poly.size());
  const double r2 = r * r;
  std::vector<char> inside(n);
  int inside_count = 0;
  for (int i = 0; i < n; ++i) {
    inside[i] = (poly[i] - center).squaredNorm() <= r2;
    inside_count += inside[i];
  }

  // edge-circle intersections, walking the polygon
  struct Node {
    Vec2 x;
    bool on_circle;
    bool exiting;  // crossing from inside to outside
  };
  std::vector<Node> walk;
  bool any_cross = false;
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    if (inside[i]) walk.push_back({p, false, false});
    // solve |p + s(q-p) - center|^2 = r^2, s in (0,1)
    const Vec2 d = q - p, m = p - center;
    const double A = d.squaredNorm();
    const double B = 2.0 * m.dot(d);
    const double C = m.squaredNorm() - r2;
    const double disc = B * B - 4.0 * A * C;
    if (disc > 0.0 && A > 0.0) {
      const double sq = std::sqrt(disc);
      // first root enters the disk, second leaves it
      const double roots[2] = {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)};
      for (int k = 0; k < 2; ++k) {
        const double s = roots[k];
        if (s > 1e-12 && s < 1.0 - 1e-12) {
          walk.push_back({p + s * d, true, k == 1});
          any_cross = true;
        }
      }
    }
  }

  if (!any_cross) {
    if (inside_count == n) return poly;  // fully inside the disk
    if (inside_count == 0) {
      // either disjoint or the disk sits inside the polygon
      int wn_inside = 0;
      for (int i = 0; i < n; ++i)
        if (cross2(poly[(i + 1) % n] - poly[i], center - poly[i]) > 0) ++wn_inside;
      if (wn_inside == n) {
        std::vector<Vec2> circle;
        for (int k = 0; k < 16; ++k) {
          const double t = 2.0 * M_PI * k / 16;
          circle.push_back(center + r * Vec2(std::cos(t), std::sin(t)));
        }
        return circle;
      }
      return {};
    }
  }

  // boundary arcs run CCW from each exit point to the next entry point
  std::vector<Vec2> result;
  const int m = static_cast<int>(walk.size());
  for (int i = 0; i < m; ++i) {
    result.push_back(walk[i].x);
    const Node& cur = walk[i];
    const Node& nxt = walk[(i + 1) % m];
    if (cur.on_circle && cur.exiting && nxt.on_circle && !nxt.exiting) {
      double t0 = std::atan2(cur.x.y() - center.y(), cur.x.x() - center.x());
      double t1 = std::atan2(nxt.x.y() - center.y(), nxt.x.x() - center.x());
      double dt = t1 - t0;
      while (dt <= 0) dt += 2.0 * M_PI;
      const int sub = std::clamp(static_cast<int>(std::ceil(dt / 0.4)), 1, 12);
      for (int k = 1; k <= sub; ++k) {
        const double t = t0 + dt * k / (sub + 1);
        result.push_back(center + r * Vec2(std::cos(t), std::sin(t)));
      }
    }
  }
  if (result.size() < 3) return {};
  return result;
}

void split_polygon_by_line(const std::vector<Vec2>& poly, const Vec2& p0, const Vec2& d,
                           std::vector<Vec2>& positive, std::vector<Vec2>& negative) {
  positive.clear();
  negative.clear();
  const int n = static_cast<int>(poly.size());
  auto side = [&](const Vec2& x) { return cross2(d, x - p0); };
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double sp = side(p), sq = side(q);
    if (sp >= 0) positive.push_back(p);
    if (sp <= 0) negative.push_back(p);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      const double t = sp / (sp - sq);
      const Vec2 x = p + t * (q - p);
      positive.push_back(x);
      negative.push_back(x);
    }
  }
  if (positive.size() < 3) positive.clear();
  if (negative.size() < 3) negative.clear();
}

bool segment_intersects_triangle(const Vec2& s0, const Vec2& s1, const Vec2& a,
                                 const Vec2& b, const Vec2& c) {
  auto inside = [&](const Vec2& x) {
    const double d1 = cross2(b - a, x - a);
    const double d2 = cross2(c - b, x - b);
    const double d3 = cross2(a - c, x - c);
    return d1 >= 0 && d2 >= 0 && d3 >= 0;
  };
  if (inside(s0) || inside(s1)) return true;
  auto seg_seg = [](const Vec2& p, const Vec2& q, const Vec2& u, const Vec2& v) {
    const double d1 = cross2(q - p, u - p);
    const double d2 = cross2(q - p, v - p);
    const double d3 = cross2(v - u, p - u);
    const double d4 = cross2(v - u, q - u);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
  };
  return seg_seg(s0, s1, a, b) || seg_seg(s0, s1, b, c) || seg_seg(s0, s1, c, a);
}

FieldSampler::FieldSampler(const Mesh& mesh, const PointLocator& locator,
                           const Eigen::VectorXcd& nodal)
    : mesh_(&mesh), locator_(&locator), nodal_(&nodal) {
  if (nodal.size() != mesh.num_vertices())
    throw std::invalid_argument("FieldSampler: nodal vector size mismatch");
}

Complex FieldSampler::value(const Vec2& x) const {
  return value_in(locator_->locate_or_throw(x), x);
}

Complex FieldSampler::value_in(int tri, const Vec2& x) const {
  const auto bc = barycentric(*mesh_, tri, x);
  const auto& tr = mesh_->triangles[tri];
  return bc[0] * (*nodal_)[tr[0]] + bc[1] * (*nodal_)[tr[1]] + bc[2] * (*nodal_)[tr[2]];
}

Eigen::Vector2<Complex> FieldSampler::gradient_in(int tri) const {
  const auto g = p1_basis_gradients(*mesh_, tri);
  const auto& tr = mesh_->triangles[tri];
  Eigen::Vector2<Complex> grad;
  grad.setZero();
  for (int k = 0; k < 3; ++k) {
    grad.x() += (*nodal_)[tr[k]] * g[k].x();
    grad.y() += (*nodal_)[tr[k]] * g[k].y();
  }
  return grad;
}

std::array<Vec2, 3> p1_basis_gradients(const Mesh& mesh, int t) {
  const auto& tr = mesh.triangles[t];
  const Vec2& a = mesh.vertices[tr[0]];
  const Vec2& b = mesh.vertices[tr[1]];
  const Vec2& c = mesh.vertices[tr[2]];
  const double det = cross2(b - a, c - a);
  // grad lambda_i = rot(opposite edge) / det, rot(v) = (-v.y, v.x)
  const Vec2 e0 = c - b, e1 = a - c, e2 = b - a;
  return {Vec2(-e0.y(), e0.x()) / det, Vec2(-e1.y(), e1.x()) / det,
          Vec2(-e2.y(), e2.x()) / det};
}

}  // namespace abspec
