#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "hdg/solver.hpp"
#include "monolithic.hpp"

using namespace hdg;

namespace {

std::shared_ptr<const Mesh2D> share(Mesh2D m) { return std::make_shared<const Mesh2D>(std::move(m)); }

Mesh2D two_triangles() {
  const auto D = BoundaryTag::dirichlet(1);
  return build_skeleton({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}},
                        {{{0, 1}, D}, {{1, 2}, D}, {{2, 3}, D}, {{3, 0}, D}});
}

ProblemData plate_data(const Mesh2D& m, double charge) {
  ProblemData d = ProblemData::uniform(m, 1.3);
  d.dirichlet[1] = [](Point x) { return x.x + 0.5 * x.y; };
  d.source = [](Point x) { return 1.0 + x.x * x.y; };
  d.charges.assign(static_cast<std::size_t>(m.conductor_count()), charge);
  return d;
}

}  // namespace

TEST(DofMap, TwoTriangleCounts) {
  const Mesh2D m = two_triangles();
  const ReferenceElement ref(1);
  const TraceDofMap dofs(m, ref);
  EXPECT_EQ(dofs.num_dofs(), 2);
  EXPECT_EQ(dg_unknown_count(m, 1), 18);
  EXPECT_EQ(dofs.num_conductors(), 0);
}

TEST(DofMap, CountsOnGeneratedMeshes) {
  const std::vector<Mesh2D> meshes{
      generate_unit_square(5),
      generate_annulus_with_fpc(1, 2, 3, 5, {12, 2, 2}),
      generate_rect_with_fpc_plates(1, 1, 10, 10, {{0.2, 0.2, 0.4, 0.4}, {0.6, 0.6, 0.8, 0.8}},
                                    RectSides{})};
  for (const auto& m : meshes) {
    for (int p = 1; p <= 6; ++p) {
      const TraceDofMap dofs(m, ReferenceElement(p));
      EXPECT_EQ(dofs.num_dofs(),
                static_cast<int>(m.num_interior_faces()) * (p + 1) + m.conductor_count());
      EXPECT_EQ(dofs.conductor_dof(1), static_cast<int>(m.num_interior_faces()) * (p + 1));
      EXPECT_EQ(dg_unknown_count(m, p), static_cast<long long>(m.num_elements()) * (p + 1) * (p + 2) / 2 * 3);
    }
  }
}

TEST(DofMap, SharedFaceNodesAgreeFromBothSides) {
  const Mesh2D m = generate_annulus_with_fpc(1, 2, 3, 5, {12, 2, 2});
  const ReferenceElement ref(3);
  const TraceDofMap dofs(m, ref);
  const int nfp = ref.num_face_nodes();
  // Every local face column must land on a trace dof at the same physical location.
  for (int k = 0; k < static_cast<int>(m.num_elements()); ++k) {
    const auto v = m.element_vertices(k);
    const auto& map = dofs.element_dofs(k);
    for (int l = 0; l < 3; ++l) {
      const bool skeleton = m.faces()[m.element_faces(k)[l]].is_interior();
      for (int j = 0; j < nfp; ++j) {
        const int g = map[l * nfp + j];
        if (!skeleton) {
          EXPECT_EQ(g, -1);
          continue;
        }
        const Point x = v[l] + ref.edge_parameters()[j] * (v[(l + 1) % 3] - v[l]);
        EXPECT_LT(norm(x - dofs.trace_node(g)), 1e-12);
      }
    }
    const auto cond = element_conductors(m, k);
    for (std::size_t c = 0; c < cond.size(); ++c) {
      EXPECT_EQ(map[3 * nfp + c], dofs.conductor_dof(cond[c]));
    }
  }
}

TEST(Assembly, MatchesDenseMonolithicSystem) {
  for (int p = 1; p <= 2; ++p) {
    const auto mesh =
        share(generate_rect_with_fpc_plates(1, 1, 3, 3, {{1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3}},
                                            RectSides{}));
    ASSERT_LE(mesh->num_elements(), 16u);
    const SolveResult res = solve_problem(mesh, p, plate_data(*mesh, -0.2));
    const auto mono = oracle::solve_monolithic(res.disc, res.locals);
    const double scale = mono.trace.cwiseAbs().maxCoeff();
    EXPECT_LT((res.report.x - mono.trace).cwiseAbs().maxCoeff(), 1e-10 * scale);
    const int np = res.disc.ref.num_nodes();
    for (std::size_t k = 0; k < mono.local.size(); ++k) {
      EXPECT_LT((res.solution.phi.col(k) - mono.local[k].head(np)).cwiseAbs().maxCoeff(), 1e-10 * scale);
      EXPECT_LT((res.solution.ex.col(k) - mono.local[k].segment(np, np)).cwiseAbs().maxCoeff(),
                1e-9 * scale);
    }
  }
}

TEST(Assembly, SymmetricAndRhsSign) {
  const auto mesh = share(generate_unit_square(4));
  ProblemData d = ProblemData::uniform(*mesh, 1.0);
  d.dirichlet[1] = [](Point) { return 0.0; };
  d.source = [](Point) { return 1.0; };
  const Discretization disc(mesh, 2, d);
  const auto locals = assemble_locals(disc);
  const GlobalTraceSystem sys = assemble_trace_system(disc, locals);
  EXPECT_LT(symmetry_defect(sys.matrix), 1e-14);
  // Positive source with a grounded boundary raises the potential.
  const Eigen::VectorXd x = CholeskyFactor(sys.matrix).solve(sys.rhs);
  EXPECT_GT(x.mean(), 0.0);
  EXPECT_GT(sys.rhs.sum(), 0.0);
}

TEST(Assembly, ChargeEntersConductorRow) {
  const auto mesh = share(generate_rect_with_fpc_plates(1, 1, 4, 4, {{0.25, 0.25, 0.5, 0.5}}, RectSides{}));
  const Discretization d0(mesh, 1, plate_data(*mesh, 0.0));
  const Discretization d1(mesh, 1, plate_data(*mesh, 2.0));
  const auto s0 = assemble_trace_system(d0, assemble_locals(d0));
  const auto s1 = assemble_trace_system(d1, assemble_locals(d1));
  const Eigen::VectorXd diff = s1.rhs - s0.rhs;
  const int row = d0.dofs.conductor_dof(1);
  EXPECT_DOUBLE_EQ(diff(row), 2.0);
  EXPECT_EQ(diff.head(row).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assembly, ElementOrderDoesNotMatter) {
  const Mesh2D base =
      generate_rect_with_fpc_plates(1, 1, 6, 6, {{1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3}}, RectSides{});
  auto tris = base.elements();
  std::reverse(tris.begin(), tris.end());
  // Rotate each triangle's vertex list too.
  for (auto& t : tris) t = {t[1], t[2], t[0]};
  const Mesh2D shuffled = build_skeleton(base.vertices(), tris, boundary_edges(base));

  const auto a = solve_problem(share(base), 2, plate_data(base, 0.4));
  const auto b = solve_problem(share(shuffled), 2, plate_data(shuffled, 0.4));
  EXPECT_NEAR(a.solution.conductor_potentials[0], b.solution.conductor_potentials[0], 1e-12);

  // Same trace value at the same node of the same face. Vertex nodes repeat
  // on every face meeting there, so the face midpoint is part of the key.
  using Key = std::array<long long, 4>;
  auto key = [](const SolveResult& r, int i) {
    const Mesh2D& m = *r.disc.mesh;
    const Face& f = m.faces()[m.interior_faces()[i / r.disc.dofs.nodes_per_face()]];
    const Point mid = 0.5 * (m.vertices()[f.vertices[0]] + m.vertices()[f.vertices[1]]);
    const Point x = r.disc.dofs.trace_node(i);
    return Key{std::llround(x.x * 1e9), std::llround(x.y * 1e9), std::llround(mid.x * 1e9),
               std::llround(mid.y * 1e9)};
  };
  std::map<Key, double> by_location;
  for (int i = 0; i < a.disc.dofs.num_trace_dofs(); ++i) by_location[key(a, i)] = a.report.x(i);
  ASSERT_EQ(a.disc.dofs.num_dofs(), b.disc.dofs.num_dofs());
  ASSERT_EQ(by_location.size(), static_cast<std::size_t>(a.disc.dofs.num_trace_dofs()));
  for (int i = 0; i < b.disc.dofs.num_trace_dofs(); ++i) {
    const auto it = by_location.find(key(b, i));
    ASSERT_NE(it, by_location.end());
    EXPECT_NEAR(it->second, b.report.x(i), 1e-11);
  }
}

TEST(Assembly, RejectsChargeCountMismatch) {
  const auto mesh = share(generate_rect_with_fpc_plates(1, 1, 4, 4, {{0.25, 0.25, 0.5, 0.5}}, RectSides{}));
  ProblemData d = plate_data(*mesh, 0.0);
  const Discretization disc(mesh, 1, d);
  std::vector<CondensedSystem> cs;
  for (const auto& ls : assemble_locals(disc)) cs.push_back(condense(ls));
  ProblemData wrong = d;
  wrong.charges = {0.0, 1.0};
  EXPECT_THROW(assemble_global(cs, disc.dofs, wrong), AssemblyError);
}

TEST(Assembly, MatrixDumpFormat) {
  const auto mesh = share(two_triangles());
  ProblemData d = ProblemData::uniform(*mesh, 1.0);
  d.dirichlet[1] = [](Point) { return 0.0; };
  const Discretization disc(mesh, 1, d);
  const auto sys = assemble_trace_system(disc, assemble_locals(disc));
  std::stringstream ss;
  write_matrix_coordinate(sys, ss);
  long long n = 0, nnz = 0;
  ss >> n >> nnz;
  EXPECT_EQ(n, 2);
  EXPECT_EQ(nnz, 4);
  int lines = 0, r = 0, c = 0;
  double v = 0.0;
  while (ss >> r >> c >> v) {
    EXPECT_DOUBLE_EQ(v, sys.matrix.coeff(r, c));
    ++lines;
  }
  EXPECT_EQ(lines, nnz);
}
