#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdg {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by load_mesh; carries the 1-based line number of the offending line.
class MeshParseError : public MeshError {
 public:
  MeshParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Classification of a mesh face. Dirichlet/Neumann carry a marker id,
/// Floating carries the conductor index (1-based).
struct BoundaryTag {
  enum class Kind { Interior, Dirichlet, Neumann, Floating };

  Kind kind = Kind::Interior;
  int id = 0;

  static BoundaryTag interior() { return {Kind::Interior, 0}; }
  static BoundaryTag dirichlet(int marker) { return {Kind::Dirichlet, marker}; }
  static BoundaryTag neumann(int marker) { return {Kind::Neumann, marker}; }
  static BoundaryTag floating(int conductor) { return {Kind::Floating, conductor}; }

  bool is_interior() const { return kind == Kind::Interior; }
  bool is_floating() const { return kind == Kind::Floating; }

  friend bool operator==(const BoundaryTag&, const BoundaryTag&) = default;
};

std::string to_string(const BoundaryTag& tag);

/// Boundary marker input for build_skeleton; the edge is undirected.
struct BoundaryEdge {
  std::array<int, 2> vertices;
  BoundaryTag tag;
};

/// Edge of the mesh. Local face l of an element joins its vertices l and l+1 (mod 3).
struct Face {
  std::array<int, 2> vertices{-1, -1};
  std::array<int, 2> elements{-1, -1};
  std::array<int, 2> local_index{-1, -1};
  BoundaryTag tag;

  bool is_interior() const { return elements[1] >= 0; }
};

/// Immutable 2D triangle mesh with tagged boundary and reconstructed skeleton.
/// Conductor interiors are holes: their surfaces are boundary faces tagged Floating.
class Mesh2D {
 public:
  Mesh2D() = default;

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& elements() const { return elements_; }
  const std::vector<Face>& faces() const { return faces_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return elements_.size(); }
  std::size_t num_faces() const { return faces_.size(); }
  std::size_t num_interior_faces() const { return interior_faces_.size(); }
  std::size_t num_boundary_faces() const { return faces_.size() - interior_faces_.size(); }
  int conductor_count() const { return conductor_count_; }

  /// Indices into faces() of skeleton faces, in mesh order.
  const std::vector<int>& interior_faces() const { return interior_faces_; }
  /// Faces of element k, indexed by local face.
  const std::array<int, 3>& element_faces(int k) const { return element_faces_[k]; }

  std::array<Point, 3> element_vertices(int k) const;
  /// Signed area; positive for every element of a valid mesh.
  double element_area(int k) const;
  double shortest_edge(int k) const;
  double longest_edge(int k) const;
  /// Unit outward normal of local face l of element k.
  Point outward_normal(int k, int local_face) const;
  double face_length(int face) const;
  double total_area() const;

  friend Mesh2D build_skeleton(std::vector<Point> vertices,
                               std::vector<std::array<int, 3>> triangles,
                               const std::vector<BoundaryEdge>& boundary);

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::vector<int> interior_faces_;
  int conductor_count_ = 0;
};

/// Builds faces and adjacency from raw triangles. Clockwise triangles are
/// reoriented. Every boundary edge must be covered by exactly one marker.
Mesh2D build_skeleton(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                      const std::vector<BoundaryEdge>& boundary);

/// Boundary faces only, in mesh face order.
std::vector<BoundaryEdge> boundary_edges(const Mesh2D& mesh);

// ---------------------------------------------------------------------------
// Generators

struct AnnulusResolution {
  int n_azimuthal = 32;
  int n_radial_inner = 8;
  int n_radial_outer = 3;
};

/// Two concentric annuli [r0, r2] and [r3, r1] around the origin, approximating
/// the circles by regular polygons. Tags: r0 -> Dirichlet(1), r1 -> Dirichlet(2),
/// r2 and r3 -> Floating(1). Radial rings are spaced geometrically.
Mesh2D generate_annulus_with_fpc(double r0, double r2, double r3, double r1,
                                 const AnnulusResolution& res);

/// Axis-aligned rectangular hole whose boundary becomes one floating conductor.
struct PlateSpec {
  double x0, y0, x1, y1;
};

struct RectSides {
  BoundaryTag left = BoundaryTag::dirichlet(1);
  BoundaryTag right = BoundaryTag::dirichlet(1);
  BoundaryTag bottom = BoundaryTag::dirichlet(1);
  BoundaryTag top = BoundaryTag::dirichlet(1);
};

/// Tensor-product grid on [0,width]x[0,height] (each cell split in two
/// triangles). Plate edges are inserted as grid lines so plates need not align
/// with the uniform spacing; cells inside plates are removed and the plate
/// perimeter is tagged Floating(i+1) for plates[i].
Mesh2D generate_rect_with_fpc_plates(double width, double height, int nx, int ny,
                                     const std::vector<PlateSpec>& plates,
                                     const RectSides& sides = {});

/// n x n unit square, 2n^2 triangles, all boundary Dirichlet(1).
Mesh2D generate_unit_square(int n);

// ---------------------------------------------------------------------------
// ASCII format: "hdgmesh 1", "vertices N", "elements K", "faces F" (boundary only).

void save_mesh(const Mesh2D& mesh, const std::filesystem::path& path);
Mesh2D load_mesh(const std::filesystem::path& path);
void write_mesh(const Mesh2D& mesh, std::ostream& out);
Mesh2D read_mesh(std::istream& in);

}  // namespace hdg
