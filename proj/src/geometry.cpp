#include "abspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace abspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double s = (p - a).dot(ab) / len2;
  s = std::clamp(s, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

}  // namespace

double Domain::diameter() const {
  double d2 = 0.0;
  for (size_t i = 0; i < boundary.size(); ++i)
    for (size_t j = i + 1; j < boundary.size(); ++j)
      d2 = std::max(d2, (boundary[i] - boundary[j]).squaredNorm());
  return std::sqrt(d2);
}

bool Domain::contains(const Vec2& x) const {
  // winding number for the closed polyline
  int wn = 0;
  const int n = static_cast<int>(boundary.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& a = boundary[i];
    const Vec2& b = boundary[(i + 1) % n];
    if (a.y() <= x.y()) {
      if (b.y() > x.y() && cross2(b - a, x - a) > 0) ++wn;
    } else {
      if (b.y() <= x.y() && cross2(b - a, x - a) < 0) --wn;
    }
  }
  return wn != 0;
}

double Domain::boundary_distance(const Vec2& x) const {
  double d = std::numeric_limits<double>::max();
  const int n = static_cast<int>(boundary.size());
  for (int i = 0; i < n; ++i)
    d = std::min(d, segment_distance(x, boundary[i], boundary[(i + 1) % n]));
  return d;
}

Domain make_disk_domain(double radius, int n_boundary) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_disk_domain: radius must be positive");
  if (n_boundary < 16)
    throw std::invalid_argument("make_disk_domain: n_boundary must be >= 16");
  Domain dom;
  dom.boundary.reserve(n_boundary);
  for (int q = 0; q < n_boundary; ++q) {
    const double t = 2.0 * kPi * q / n_boundary;
    dom.boundary.emplace_back(radius * std::cos(t), radius * std::sin(t));
  }
  dom.contains_origin = true;
  return dom;
}

Domain read_polygon_domain(std::istream& in) {
  Domain dom;
  double x, y;
  while (in >> x >> y) dom.boundary.emplace_back(x, y);
  if (dom.boundary.size() < 3)
    throw std::invalid_argument("read_polygon_domain: need at least 3 vertices");
  dom.contains_origin = dom.contains(Vec2(0, 0));
  return dom;
}

Domain rescale_to_contain_disk(const Domain& dom, double r) {
  if (!dom.contains(Vec2(0, 0)))
    throw std::invalid_argument("rescale_to_contain_disk: origin not inside domain");
  const double d0 = dom.boundary_distance(Vec2(0, 0));
  const double s = 1.01 * r / d0;
  Domain out = dom;
  if (s > 1.0)
    for (auto& v : out.boundary) v *= s;
  out.contains_origin = true;
  return out;
}

double Mesh::triangle_area(int t) const {
  const auto& tr = triangles[t];
  return 0.5 * cross2(vertices[tr[1]] - vertices[tr[0]], vertices[tr[2]] - vertices[tr[0]]);
}

double Mesh::triangle_diameter(int t) const {
  const auto& tr = triangles[t];
  const double a = (vertices[tr[1]] - vertices[tr[0]]).norm();
  const double b = (vertices[tr[2]] - vertices[tr[1]]).norm();
  const double c = (vertices[tr[0]] - vertices[tr[2]]).norm();
  return std::max({a, b, c});
}

double Mesh::triangle_quality(int t) const {
  const auto& tr = triangles[t];
  const double a = (vertices[tr[1]] - vertices[tr[0]]).norm();
  const double b = (vertices[tr[2]] - vertices[tr[1]]).norm();
  const double c = (vertices[tr[0]] - vertices[tr[2]]).norm();
  const double s = 0.5 * (a + b + c);
  const double area = triangle_area(t);
  if (s <= 0.0 || area <= 0.0) return 0.0;
  const double inradius = area / s;
  return inradius / std::max({a, b, c});
}

double default_grading_exponent(double alpha) {
  const double mu = std::min(alpha, 1.0 - alpha);
  return std::clamp(2.0 / mu, 2.0, 8.0);
}

int suggested_boundary_count(double radius, double h_max, double grading_exponent) {
  const double beta = std::clamp(grading_exponent, 1.0, 8.0);
  const double size = h_max * std::pow(0.5, 1.0 - 1.0 / beta);
  const int raw = static_cast<int>(std::ceil(2.0 * kPi * radius / (1.2 * size)));
  return std::max(16, ((raw + 15) / 16) * 16);
}

namespace {

struct RingPlan {
  std::vector<double> rho;  // ring radii in reference scale, ascending; last = d_ref
  std::vector<int> count;   // sector count per ring
};

// Ring radii descending from d_ref by the grading law, then reversed.
// size(r) = h_max * max(r/D, floor)^(1-1/beta); radial step 0.95*size(r);
// grading stops at the core radius h_max*floor^(1-1/beta).
RingPlan plan_rings(double d_ref, double D, double h_max, double beta, int n_boundary) {
  const double expo = 1.0 - 1.0 / beta;
  const double floorv = std::clamp(std::pow(h_max / D, 1.5), 1e-9, 0.25);
  auto size = [&](double r) { return h_max * std::pow(std::max(r / D, floorv), expo); };
  const double core = h_max * std::pow(floorv, expo);

  std::vector<double> desc;
  double r = d_ref;
  while (true) {
    desc.push_back(r);
    const double next = r - 0.95 * size(r);
    if (next < core) break;
    r = next;
    if (desc.size() > 200000) throw std::runtime_error("mesh_domain: ring plan overflow");
  }
  if (desc.back() > 1.3 * core) desc.push_back(core);
  std::reverse(desc.begin(), desc.end());

  RingPlan plan;
  plan.rho = std::move(desc);
  const int L = static_cast<int>(plan.rho.size());
  plan.count.assign(L, n_boundary);
  for (int m = L - 2; m >= 0; --m) {
    int q = plan.count[m + 1];
    const double dr = plan.rho[m + 1] - plan.rho[m];
    if (q % 2 == 0 && q > 8 && 2.0 * kPi * plan.rho[m] / q < 0.5 * dr) q /= 2;
    plan.count[m] = q;
  }
  return plan;
}

void append_annulus(Mesh& mesh, const std::vector<int>& inner, const std::vector<int>& outer) {
  const int ni = static_cast<int>(inner.size());
  const int no = static_cast<int>(outer.size());
  if (no == ni) {
    for (int q = 0; q < ni; ++q) {
      const int q1 = (q + 1) % ni;
      mesh.triangles.push_back({inner[q], outer[q], outer[q1]});
      mesh.triangles.push_back({inner[q], outer[q1], inner[q1]});
    }
  } else if (no == 2 * ni) {
    for (int q = 0; q < ni; ++q) {
      const int q1 = (q + 1) % ni;
      const int o0 = outer[2 * q], o1 = outer[2 * q + 1], o2 = outer[(2 * q + 2) % no];
      mesh.triangles.push_back({inner[q], o0, o1});
      mesh.triangles.push_back({inner[q], o1, inner[q1]});
      mesh.triangles.push_back({inner[q1], o1, o2});
    }
  } else {
    throw std::runtime_error("mesh_domain: incompatible ring counts");
  }
}

}  // namespace

Mesh mesh_domain(const Domain& dom, const Vec2& pole, double h_max,
                 double grading_exponent) {
  const int n = static_cast<int>(dom.boundary.size());
  if (n < 3) throw std::invalid_argument("mesh_domain: empty domain");
  if (!(h_max > 0.0)) throw std::invalid_argument("mesh_domain: h_max must be positive");
  if (!dom.contains(pole)) throw std::invalid_argument("mesh_domain: pole on or outside boundary");
  const double d_min = dom.boundary_distance(pole);
  if (d_min <= h_max)
    throw std::invalid_argument("mesh_domain: pole too close to boundary (within one h_max)");

  // star-shapedness from the pole: vertex directions strictly increasing (CCW)
  std::vector<double> dist(n), dir(n);
  double d_max = 0.0;
  for (int q = 0; q < n; ++q) {
    const Vec2 rel = dom.boundary[q] - pole;
    dist[q] = rel.norm();
    dir[q] = std::atan2(rel.y(), rel.x());
    d_max = std::max(d_max, dist[q]);
  }
  for (int q = 0; q < n; ++q) {
    double dt = dir[(q + 1) % n] - dir[q];
    if (dt <= 0) dt += 2.0 * kPi;
    if (dt <= 0 || dt >= kPi)
      throw std::invalid_argument("mesh_domain: domain is not star-shaped from the pole");
  }
  if (d_max / d_min > 2.5)
    throw std::invalid_argument("mesh_domain: pole too eccentric for graded ring meshing");

  const double beta = std::clamp(grading_exponent, 1.0, 8.0);
  const double D = dom.diameter();
  {
    // boundary sampling must resolve the target size near the boundary
    const double expo = 1.0 - 1.0 / beta;
    double worst = 0.0;
    for (int q = 0; q < n; ++q) {
      const double len = (dom.boundary[(q + 1) % n] - dom.boundary[q]).norm();
      const Vec2 mid = 0.5 * (dom.boundary[(q + 1) % n] + dom.boundary[q]);
      const double sz = h_max * std::pow((mid - pole).norm() / D, expo);
      worst = std::max(worst, len / sz);
    }
    if (worst > 1.7)
      throw std::invalid_argument(
          "mesh_domain: boundary polyline too coarse for h_max (raise n_boundary or h_max)");
  }
  const RingPlan plan = plan_rings(d_min, D, h_max, beta, n);
  const int L = static_cast<int>(plan.rho.size());
  if (L < 3)
    throw std::invalid_argument("mesh_domain: h_max too coarse, fewer than 3 rings fit");

  Mesh mesh;
  mesh.h_max = h_max;
  mesh.grading_exponent = beta;
  mesh.pole_vertex = 0;
  mesh.vertices.push_back(pole);

  std::vector<std::vector<int>> ring(L);
  for (int m = 0; m < L; ++m) {
    const int q_count = plan.count[m];
    const int stride = n / q_count;
    const double u = plan.rho[m] / d_min;  // fraction of each direction's reach
    ring[m].reserve(q_count);
    for (int q = 0; q < q_count; ++q) {
      const int b = q * stride;
      Vec2 pos;
      if (m == L - 1)
        pos = dom.boundary[b];  // boundary samples kept bit-exact
      else
        pos = pole + u * (dom.boundary[b] - pole);
      ring[m].push_back(mesh.num_vertices());
      mesh.vertices.push_back(pos);
    }
  }

  // fan around the pole, then annuli outward
  {
    const auto& r0 = ring[0];
    const int q0 = static_cast<int>(r0.size());
    for (int q = 0; q < q0; ++q)
      mesh.triangles.push_back({0, r0[q], r0[(q + 1) % q0]});
  }
  for (int m = 0; m + 1 < L; ++m) append_annulus(mesh, ring[m], ring[m + 1]);

  mesh.boundary_vertices = ring[L - 1];

  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (!(mesh.triangle_area(t) > 0.0))
      throw std::runtime_error("mesh_domain: degenerate element " + std::to_string(t));
  return mesh;
}

Mesh remesh_for_pole(const Mesh& mesh, const Vec2& new_pole) {
  const Vec2 old_pole = mesh.pole();
  const Vec2 delta = new_pole - old_pole;
  if (delta.norm() == 0.0) return mesh;

  double d_min = std::numeric_limits<double>::max();
  for (int b : mesh.boundary_vertices)
    d_min = std::min(d_min, (mesh.vertices[b] - old_pole).norm());
  const double r_in = 0.15 * d_min;
  const double r_out = 0.95 * d_min;
  if (delta.norm() >= 0.12 * d_min)
    throw std::invalid_argument(
        "remesh_for_pole: pole displacement too large for deformation; rebuild with mesh_domain");

  // quintic blend: 1 on [0, r_in], 0 on [r_out, inf), C^2 in between
  auto blend = [&](double r) {
    if (r <= r_in) return 1.0;
    if (r >= r_out) return 0.0;
    const double s = (r - r_in) / (r_out - r_in);
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  };

  Mesh out = mesh;
  for (auto& v : out.vertices) {
    const double r = (v - old_pole).norm();
    const double w = blend(r);
    if (w > 0.0) v += w * delta;
  }
  out.vertices[out.pole_vertex] = new_pole;  // plateau keeps this exact anyway

  for (int t = 0; t < out.num_triangles(); ++t)
    if (!(out.triangle_area(t) > 0.0))
      throw std::runtime_error("remesh_for_pole: degenerate element " + std::to_string(t));
  return out;
}

MeshCheck check_mesh(const Mesh& mesh) {
  MeshCheck c;
  c.min_area = std::numeric_limits<double>::max();
  c.min_quality = std::numeric_limits<double>::max();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double a = mesh.triangle_area(t);
    c.min_area = std::min(c.min_area, a);
    c.min_quality = std::min(c.min_quality, mesh.triangle_quality(t));
    if (!(a > 0.0)) {
      c.error = "non-positive area in element " + std::to_string(t);
      return c;
    }
  }
  c.oriented = true;

  // conformity: interior edges in exactly 2 triangles, boundary edges in 1
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tr : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      int i = tr[e], j = tr[(e + 1) % 3];
      if (i > j) std::swap(i, j);
      edge_count[{i, j}]++;
    }
  std::vector<char> on_boundary(mesh.num_vertices(), 0);
  for (int b : mesh.boundary_vertices) on_boundary[b] = 1;
  for (const auto& [edge, cnt] : edge_count) {
    if (cnt > 2) {
      c.error = "edge shared by more than 2 triangles";
      return c;
    }
    if (cnt == 1 && !(on_boundary[edge.first] && on_boundary[edge.second])) {
      c.error = "interior edge with a single triangle (hanging node?)";
      return c;
    }
  }
  c.conforming = true;
  c.boundary_closed = true;

  // grading law: diam(T) <= 2 h_max max(d/D, floor)^(1-1/beta)
  double D = 0.0;
  for (size_t i = 0; i < mesh.boundary_vertices.size(); ++i)
    for (size_t j = i + 1; j < mesh.boundary_vertices.size(); ++j)
      D = std::max(D, (mesh.vertices[mesh.boundary_vertices[i]] -
                       mesh.vertices[mesh.boundary_vertices[j]])
                          .norm());
  const double expo = 1.0 - 1.0 / mesh.grading_exponent;
  const double floorv = std::clamp(std::pow(mesh.h_max / D, 1.5), 1e-9, 0.25);
  const Vec2 pole = mesh.pole();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tr = mesh.triangles[t];
    const Vec2 centroid =
        (mesh.vertices[tr[0]] + mesh.vertices[tr[1]] + mesh.vertices[tr[2]]) / 3.0;
    const double d = (centroid - pole).norm();
    const double bound = 2.0 * mesh.h_max * std::pow(std::max(d / D, floorv), expo);
    c.max_grading_defect = std::max(c.max_grading_defect, mesh.triangle_diameter(t) / bound);
  }
  if (c.max_grading_defect > 1.0) c.error = "grading law violated";
  return c;
}

void write_abmesh(const Mesh& mesh, std::ostream& out) {
  char buf[128];
  out << "abmesh 1\n";
  std::snprintf(buf, sizeof buf, "g %.17g %.17g\n", mesh.h_max, mesh.grading_exponent);
  out << buf;
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", v.x(), v.y());
    out << buf;
  }
  for (const auto& t : mesh.triangles) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (int b : mesh.boundary_vertices) out << "b " << b << '\n';
  out << "p " << mesh.pole_vertex << '\n';
}

Mesh read_abmesh(std::istream& in) {
  std::string header;
  std::getline(in, header);
  if (header != "abmesh 1") throw std::runtime_error("read_abmesh: bad header");
  Mesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    char tag;
    ls >> tag;
    if (tag == 'g') {
      ls >> mesh.h_max >> mesh.grading_exponent;
    } else if (tag == 'v') {
      double x, y;
      ls >> x >> y;
      mesh.vertices.emplace_back(x, y);
    } else if (tag == 't') {
      std::array<int, 3> t{};
      ls >> t[0] >> t[1] >> t[2];
      mesh.triangles.push_back(t);
    } else if (tag == 'b') {
      int b;
      ls >> b;
      mesh.boundary_vertices.push_back(b);
    } else if (tag == 'p') {
      ls >> mesh.pole_vertex;
    } else {
      throw std::runtime_error("read_abmesh: unknown record '" + std::string(1, tag) + "'");
    }
    if (ls.fail()) throw std::runtime_error("read_abmesh: malformed line: " + line);
  }
  if (mesh.pole_vertex < 0 || mesh.pole_vertex >= mesh.num_vertices())
    throw std::runtime_error("read_abmesh: missing or invalid pole record");
  return mesh;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  lo_ = Vec2(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  hi_ = -lo_;
  for (const auto& v : mesh.vertices) {
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  const int target = std::max(8, static_cast<int>(std::sqrt(double(mesh.num_triangles()))));
  cell_ = std::max((hi_ - lo_).maxCoeff() / target, 1e-12);
  nx_ = std::max(1, static_cast<int>((hi_.x() - lo_.x()) / cell_) + 1);
  ny_ = std::max(1, static_cast<int>((hi_.y() - lo_.y()) / cell_) + 1);
  bins_.resize(static_cast<size_t>(nx_) * ny_);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tr = mesh.triangles[t];
    Vec2 tlo = mesh.vertices[tr[0]], thi = tlo;
    for (int k = 1; k < 3; ++k) {
      tlo = tlo.cwiseMin(mesh.vertices[tr[k]]);
      thi = thi.cwiseMax(mesh.vertices[tr[k]]);
    }
    const int ix0 = std::clamp(static_cast<int>((tlo.x() - lo_.x()) / cell_), 0, nx_ - 1);
    const int ix1 = std::clamp(static_cast<int>((thi.x() - lo_.x()) / cell_), 0, nx_ - 1);
    const int iy0 = std::clamp(static_cast<int>((tlo.y() - lo_.y()) / cell_), 0, ny_ - 1);
    const int iy1 = std::clamp(static_cast<int>((thi.y() - lo_.y()) / cell_), 0, ny_ - 1);
    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix)
        bins_[static_cast<size_t>(iy) * nx_ + ix].push_back(t);
  }
}

int PointLocator::bin_index(const Vec2& x) const {
  const int ix = std::clamp(static_cast<int>((x.x() - lo_.x()) / cell_), 0, nx_ - 1);
  const int iy = std::clamp(static_cast<int>((x.y() - lo_.y()) / cell_), 0, ny_ - 1);
  return iy * nx_ + ix;
}

int PointLocator::locate(const Vec2& x) const {
  const auto& cand = bins_[bin_index(x)];
  int best = -1;
  double best_defect = 1e-9;  // tolerance on barycentric negativity
  for (int t : cand) {
    const auto bc = barycentric(*mesh_, t, x);
    const double defect = -std::min({bc[0], bc[1], bc[2]});
    if (defect <= 0.0) return t;
    if (defect < best_defect) {
      best_defect = defect;
      best = t;
    }
  }
  return best;
}

int PointLocator::locate_or_throw(const Vec2& x) const {
  const int t = locate(x);
  if (t < 0)
    throw std::runtime_error("PointLocator: point (" + std::to_string(x.x()) + ", " +
                             std::to_string(x.y()) + ") outside mesh");
  return t;
}

std::array<double, 3> barycentric(const Mesh& mesh, int t, const Vec2& x) {
  const auto& tr = mesh.triangles[t];
  const Vec2& a = mesh.vertices[tr[0]];
  const Vec2& b = mesh.vertices[tr[1]];
  const Vec2& c = mesh.vertices[tr[2]];
  const double det = cross2(b - a, c - a);
  const double l1 = cross2(x - a, c - a) / det;
  const double l2 = cross2(b - a, x - a) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace abspec
