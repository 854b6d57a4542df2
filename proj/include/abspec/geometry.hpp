#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace abspec {

using Vec2 = Eigen::Vector2d;

/// Planar domain bounded by a simple closed polyline (counterclockwise,
/// first vertex not repeated at the end).
struct Domain {
  std::vector<Vec2> boundary;
  bool contains_origin = true;

  double diameter() const;
  bool contains(const Vec2& x) const;          // strict interior test
  double boundary_distance(const Vec2& x) const; // distance to the polyline
};

/// Regular n-gon inscribed in the circle of the given radius, centered at
/// the origin. n_boundary < 16 is rejected: too-coarse boundaries spoil the
/// eigenvalue tolerances downstream.
Domain make_disk_domain(double radius, int n_boundary);

/// Domain read from a polygon file: one "x y" pair per line, CCW.
Domain read_polygon_domain(std::istream& in);

/// Scales the domain about the origin so that the closed disk of radius r
/// fits strictly inside. Rescaling is explicit, never implicit.
Domain rescale_to_contain_disk(const Domain& dom, double r);

/// Conforming triangulation, graded toward a marked pole vertex.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles; // positively oriented
  std::vector<int> boundary_vertices;        // exactly the polyline samples
  int pole_vertex = -1;
  double grading_exponent = 2.0;
  double h_max = 0.1;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  Vec2 pole() const { return vertices[pole_vertex]; }

  double triangle_area(int t) const;
  double triangle_diameter(int t) const;
  /// inradius / diameter, in (0, ~0.29]; larger is better
  double triangle_quality(int t) const;
};

/// Graded mesh of a domain star-shaped with respect to the pole. A vertex is
/// placed exactly at the pole. Element size follows
///   h(d) = h_max * max(d/D, floor)^(1 - 1/grading_exponent)
/// with d the distance to the pole and D the domain diameter, up to a factor
/// 2. grading_exponent is clamped to [1, 8]; 1 means uniform.
Mesh mesh_domain(const Domain& dom, const Vec2& pole, double h_max,
                 double grading_exponent);

/// Default grading exponent for circulation alpha: 2/min(alpha, 1-alpha),
/// clamped to [2, 8].
double default_grading_exponent(double alpha);

/// Boundary vertex count (multiple of 16) matching the grading law's target
/// size at the boundary of a disk of the given radius.
int suggested_boundary_count(double radius, double h_max, double grading_exponent);

/// Mesh for a new pole position, obtained deterministically from an existing
/// mesh by a smooth deformation that moves the old pole to the new one and
/// keeps the boundary fixed. Topology is preserved, so meshes for nearby
/// poles differ smoothly; this keeps discretization errors correlated across
/// a pole sweep.
Mesh remesh_for_pole(const Mesh& mesh, const Vec2& new_pole);

/// Validation report used by tests and by the builders themselves.
struct MeshCheck {
  bool oriented = false;       // all signed areas > 0
  bool conforming = false;     // interior edges shared by exactly 2 triangles
  bool boundary_closed = false;
  double min_quality = 0.0;
  double min_area = 0.0;
  double max_grading_defect = 0.0; // max diam / (2 h(d)) over elements
  std::string error;           // first failure, empty if ok
  bool ok() const { return error.empty(); }
};
MeshCheck check_mesh(const Mesh& mesh);

/// Plain-text mesh format "abmesh 1": v/t/b/p records, 17-significant-digit
/// floats, exact decimal round trip.
void write_abmesh(const Mesh& mesh, std::ostream& out);
Mesh read_abmesh(std::istream& in);

/// Uniform-grid point locator over the triangles of a mesh.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);

  /// Index of a triangle containing x (within tolerance), or -1.
  int locate(const Vec2& x) const;
  /// As locate(), but throws std::runtime_error if not found.
  int locate_or_throw(const Vec2& x) const;

  const Mesh& mesh() const { return *mesh_; }

 private:
  const Mesh* mesh_;
  Vec2 lo_, hi_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> bins_;
  int bin_index(const Vec2& x) const;
};

/// Barycentric coordinates of x in triangle t.
std::array<double, 3> barycentric(const Mesh& mesh, int t, const Vec2& x);

}  // namespace abspec
