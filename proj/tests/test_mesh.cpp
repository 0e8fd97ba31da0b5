#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hdg/mesh.hpp"

using namespace hdg;

namespace {

int count_kind(const Mesh2D& mesh, BoundaryTag::Kind kind) {
  int n = 0;
  for (const auto& f : mesh.faces()) n += f.tag.kind == kind;
  return n;
}

double floating_length(const Mesh2D& mesh, int conductor) {
  double len = 0.0;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const auto& tag = mesh.faces()[f].tag;
    if (tag.is_floating() && tag.id == conductor) len += mesh.face_length(static_cast<int>(f));
  }
  return len;
}

// Unit square split along the diagonal (0,0)-(1,1).
Mesh2D two_triangles() {
  std::vector<Point> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::array<int, 3>> t{{0, 1, 2}, {0, 2, 3}};
  std::vector<BoundaryEdge> b{{{0, 1}, BoundaryTag::dirichlet(1)},
                              {{1, 2}, BoundaryTag::dirichlet(1)},
                              {{2, 3}, BoundaryTag::neumann(2)},
                              {{3, 0}, BoundaryTag::neumann(2)}};
  return build_skeleton(v, t, b);
}

}  // namespace

TEST(Mesh, TwoTriangleSkeleton) {
  const Mesh2D m = two_triangles();
  EXPECT_EQ(m.num_elements(), 2u);
  EXPECT_EQ(m.num_faces(), 5u);
  ASSERT_EQ(m.num_interior_faces(), 1u);
  const Face& f = m.faces()[m.interior_faces()[0]];
  EXPECT_EQ(std::min(f.vertices[0], f.vertices[1]), 0);
  EXPECT_EQ(std::max(f.vertices[0], f.vertices[1]), 2);
  EXPECT_EQ(m.conductor_count(), 0);
  EXPECT_DOUBLE_EQ(m.total_area(), 1.0);
  EXPECT_DOUBLE_EQ(m.shortest_edge(0), 1.0);
  EXPECT_DOUBLE_EQ(m.longest_edge(0), std::sqrt(2.0));
}

TEST(Mesh, UnitSquareCounts) {
  for (int n : {1, 2, 5, 16}) {
    const Mesh2D m = generate_unit_square(n);
    EXPECT_EQ(m.num_elements(), static_cast<std::size_t>(2 * n * n));
    // 2n(n+1) grid edges plus n^2 diagonals, 4n of them on the boundary.
    EXPECT_EQ(m.num_interior_faces(), static_cast<std::size_t>(3 * n * n - 2 * n));
    EXPECT_EQ(m.num_boundary_faces(), static_cast<std::size_t>(4 * n));
    EXPECT_NEAR(m.total_area(), 1.0, 1e-14);
  }
}

TEST(Mesh, InteriorNormalsAreOpposite) {
  const Mesh2D m = generate_annulus_with_fpc(0.001, 0.008, 0.012, 0.02, {16, 3, 2});
  for (int fi : m.interior_faces()) {
    const Face& f = m.faces()[fi];
    const Point n0 = m.outward_normal(f.elements[0], f.local_index[0]);
    const Point n1 = m.outward_normal(f.elements[1], f.local_index[1]);
    EXPECT_NEAR(n0.x + n1.x, 0.0, 1e-14);
    EXPECT_NEAR(n0.y + n1.y, 0.0, 1e-14);
    EXPECT_NEAR(norm(n0), 1.0, 1e-14);
  }
}

TEST(Mesh, OutwardNormalPointsAwayFromCentroid) {
  const Mesh2D m = generate_unit_square(3);
  for (int k = 0; k < static_cast<int>(m.num_elements()); ++k) {
    const auto v = m.element_vertices(k);
    const Point c = (1.0 / 3.0) * (v[0] + v[1] + v[2]);
    EXPECT_GT(m.element_area(k), 0.0);
    for (int l = 0; l < 3; ++l) {
      const Point mid = 0.5 * (v[l] + v[(l + 1) % 3]);
      EXPECT_GT(dot(m.outward_normal(k, l), mid - c), 0.0);
    }
  }
}

TEST(Mesh, AnnulusGeometry) {
  const double r0 = 0.001, r2 = 0.008, r3 = 0.012, r1 = 0.02;
  const AnnulusResolution res{24, 4, 2};
  const Mesh2D m = generate_annulus_with_fpc(r0, r2, r3, r1, res);
  EXPECT_EQ(m.conductor_count(), 1);
  EXPECT_EQ(count_kind(m, BoundaryTag::Kind::Floating), 2 * res.n_azimuthal);
  EXPECT_EQ(count_kind(m, BoundaryTag::Kind::Dirichlet), 2 * res.n_azimuthal);
  EXPECT_EQ(m.num_elements(),
            static_cast<std::size_t>(2 * res.n_azimuthal * (res.n_radial_inner + res.n_radial_outer)));
  // Regular n-gon of circumradius r has area n r^2 sin(2 pi / n) / 2.
  const double n = res.n_azimuthal;
  const double s = 0.5 * n * std::sin(2.0 * std::numbers::pi / n);
  EXPECT_NEAR(m.total_area(), s * (r2 * r2 - r0 * r0 + r1 * r1 - r3 * r3), 1e-15);
  // Floating perimeter: two polygons, side 2 r sin(pi/n).
  const double side = 2.0 * std::sin(std::numbers::pi / n);
  EXPECT_NEAR(floating_length(m, 1), n * side * (r2 + r3), 1e-14);
  for (const auto& p : m.vertices()) {
    const double r = norm(p);
    EXPECT_GE(r, r0 * (1 - 1e-12));
    EXPECT_LE(r, r1 * (1 + 1e-12));
    EXPECT_FALSE(r > r2 * (1 + 1e-12) && r < r3 * (1 - 1e-12));
  }
}

TEST(Mesh, AnnulusRejectsBadInput) {
  EXPECT_THROW(generate_annulus_with_fpc(0.01, 0.008, 0.012, 0.02, {}), MeshError);
  EXPECT_THROW(generate_annulus_with_fpc(0.001, 0.008, 0.012, 0.02, {4, 2, 2}), MeshError);
  EXPECT_THROW(generate_annulus_with_fpc(0.001, 0.008, 0.012, 0.02, {16, 0, 2}), MeshError);
}

TEST(Mesh, PlateHolesAndTags) {
  const std::vector<PlateSpec> plates{{0.25, 0.3, 0.35, 0.7}, {0.65, 0.3, 0.75, 0.7}};
  const Mesh2D m = generate_rect_with_fpc_plates(1.0, 1.0, 20, 20, plates, RectSides{});
  EXPECT_EQ(m.conductor_count(), 2);
  for (int c = 1; c <= 2; ++c) {
    const auto& p = plates[c - 1];
    EXPECT_NEAR(floating_length(m, c), 2.0 * ((p.x1 - p.x0) + (p.y1 - p.y0)), 1e-13);
  }
  EXPECT_NEAR(m.total_area(), 1.0 - 2 * 0.1 * 0.4, 1e-13);
  for (int k = 0; k < static_cast<int>(m.num_elements()); ++k) {
    const auto v = m.element_vertices(k);
    const Point c = (1.0 / 3.0) * (v[0] + v[1] + v[2]);
    for (const auto& p : plates) EXPECT_FALSE(c.x > p.x0 && c.x < p.x1 && c.y > p.y0 && c.y < p.y1);
  }
}

TEST(Mesh, PlateOffGridIsInserted) {
  // 0.33 is not on the 0.1-spaced grid; the generator adds it as a grid line.
  const Mesh2D m =
      generate_rect_with_fpc_plates(1.0, 1.0, 10, 10, {{0.33, 0.41, 0.52, 0.6}}, RectSides{});
  EXPECT_NEAR(floating_length(m, 1), 2.0 * (0.19 + 0.19), 1e-13);
  EXPECT_NEAR(m.total_area(), 1.0 - 0.19 * 0.19, 1e-13);
}

TEST(Mesh, PlateRejectsOverlapAndBoundaryContact) {
  EXPECT_THROW(generate_rect_with_fpc_plates(1, 1, 10, 10, {{0.2, 0.2, 0.5, 0.5}, {0.4, 0.4, 0.6, 0.6}},
                                             RectSides{}),
               MeshError);
  EXPECT_THROW(generate_rect_with_fpc_plates(1, 1, 10, 10, {{0.0, 0.2, 0.5, 0.5}}, RectSides{}),
               MeshError);
}

TEST(Mesh, ClockwiseTrianglesAreReoriented) {
  std::vector<Point> v{{0, 0}, {1, 0}, {0, 1}};
  const Mesh2D m = build_skeleton(v, {{0, 2, 1}},
                                  {{{0, 1}, BoundaryTag::dirichlet(1)},
                                   {{1, 2}, BoundaryTag::dirichlet(1)},
                                   {{2, 0}, BoundaryTag::dirichlet(1)}});
  EXPECT_NEAR(m.element_area(0), 0.5, 1e-15);
}

TEST(Mesh, BuildErrors) {
  std::vector<Point> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 0.5}};
  const auto D = BoundaryTag::dirichlet(1);
  // Three triangles on edge (1,2).
  EXPECT_THROW(build_skeleton(v, {{0, 1, 2}, {1, 4, 2}, {1, 2, 3}}, {}), MeshError);
  // Missing marker.
  EXPECT_THROW(build_skeleton(v, {{0, 1, 2}, {0, 2, 3}},
                              {{{0, 1}, D}, {{1, 2}, D}, {{2, 3}, D}}),
               MeshError);
  // Marker on the interior diagonal.
  EXPECT_THROW(build_skeleton(v, {{0, 1, 2}, {0, 2, 3}},
                              {{{0, 1}, D}, {{1, 2}, D}, {{2, 3}, D}, {{3, 0}, D}, {{0, 2}, D}}),
               MeshError);
  // Degenerate and empty.
  EXPECT_THROW(build_skeleton({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, {}), MeshError);
  EXPECT_THROW(build_skeleton(v, {}, {}), MeshError);
  // Conductor ids must be 1..M.
  EXPECT_THROW(build_skeleton(v, {{0, 1, 2}, {0, 2, 3}},
                              {{{0, 1}, D},
                               {{1, 2}, D},
                               {{2, 3}, BoundaryTag::floating(2)},
                               {{3, 0}, D}}),
               MeshError);
}

TEST(MeshIo, RoundTrip) {
  const Mesh2D m = generate_rect_with_fpc_plates(2.0, 1.0, 8, 4, {{0.5, 0.25, 1.0, 0.75}},
                                                 RectSides{BoundaryTag::dirichlet(1),
                                                           BoundaryTag::dirichlet(2),
                                                           BoundaryTag::neumann(1),
                                                           BoundaryTag::neumann(3)});
  std::stringstream ss;
  write_mesh(m, ss);
  const Mesh2D r = read_mesh(ss);
  ASSERT_EQ(r.num_vertices(), m.num_vertices());
  ASSERT_EQ(r.num_elements(), m.num_elements());
  ASSERT_EQ(r.num_faces(), m.num_faces());
  EXPECT_EQ(r.vertices(), m.vertices());
  EXPECT_EQ(r.elements(), m.elements());
  EXPECT_EQ(r.conductor_count(), 1);
  for (std::size_t f = 0; f < m.num_faces(); ++f) EXPECT_EQ(r.faces()[f].tag, m.faces()[f].tag);
}

TEST(MeshIo, ParseErrorsCarryLineNumbers) {
  std::stringstream bad("hdgmesh 1\nvertices 3\n0 0\n1 0\n0 x\nelements 1\n0 1 2\n");
  try {
    read_mesh(bad);
    FAIL() << "expected MeshParseError";
  } catch (const MeshParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
  std::stringstream wrong_header("mesh 1\n");
  EXPECT_THROW(read_mesh(wrong_header), MeshParseError);
  std::stringstream truncated("hdgmesh 1\nvertices 3\n0 0\n");
  EXPECT_THROW(read_mesh(truncated), MeshParseError);
  std::stringstream no_id(
      "hdgmesh 1\nvertices 3\n0 0\n1 0\n0 1\nelements 1\n0 1 2\nfaces 3\n0 1 D 1\n1 2 C\n2 0 D 1\n");
  EXPECT_THROW(read_mesh(no_id), MeshParseError);
}
