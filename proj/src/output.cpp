#include "hdg/output.hpp"

#include <iomanip>
#include <ostream>
#include <vector>

namespace hdg {

namespace {

// Sub-triangles of the node lattice, as node-index triples.
std::vector<std::array<int, 3>> lattice_triangles(const ReferenceElement& ref) {
  const int p = ref.order();
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p - j; ++i) {
      tris.push_back({ref.lattice_index(i, j), ref.lattice_index(i + 1, j),
                      ref.lattice_index(i, j + 1)});
      if (i < p - j - 1) {
        tris.push_back({ref.lattice_index(i + 1, j), ref.lattice_index(i + 1, j + 1),
                        ref.lattice_index(i, j + 1)});
      }
    }
  }
  return tris;
}

}  // namespace

void write_vtk(const Discretization& disc, const Solution& sol, std::ostream& out) {
  const auto& mesh = *disc.mesh;
  const auto& ref = disc.ref;
  const int np = ref.num_nodes();
  const auto k_count = static_cast<int>(mesh.num_elements());
  const auto tris = lattice_triangles(ref);
  const long long n_points = static_cast<long long>(k_count) * np;
  const long long n_cells = static_cast<long long>(k_count) * static_cast<long long>(tris.size());

  out << "# vtk DataFile Version 3.0\n";
  out << "HDG solution, order " << ref.order() << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << n_points << " double\n";
  for (int k = 0; k < k_count; ++k) {
    const auto v = mesh.element_vertices(k);
    for (const Point& r : ref.nodes()) {
      const Point x = v[0] + r.x * (v[1] - v[0]) + r.y * (v[2] - v[0]);
      out << x.x << " " << x.y << " 0\n";
    }
  }
  out << "CELLS " << n_cells << " " << 4 * n_cells << "\n";
  for (int k = 0; k < k_count; ++k) {
    const long long base = static_cast<long long>(k) * np;
    for (const auto& t : tris) {
      out << "3 " << base + t[0] << " " << base + t[1] << " " << base + t[2] << "\n";
    }
  }
  out << "CELL_TYPES " << n_cells << "\n";
  for (long long c = 0; c < n_cells; ++c) out << "5\n";

  out << "POINT_DATA " << n_points << "\n";
  out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < k_count; ++k) {
    for (int i = 0; i < np; ++i) out << sol.phi(i, k) << "\n";
  }
  out << "VECTORS E double\n";
  for (int k = 0; k < k_count; ++k) {
    for (int i = 0; i < np; ++i) out << sol.ex(i, k) << " " << sol.ey(i, k) << " 0\n";
  }
}

void write_line_csv(std::span<const LineSample> samples, std::ostream& out) {
  out << "s,x,y,phi,Ex,Ey,inside\n" << std::setprecision(17);
  for (const auto& s : samples) {
    out << s.s << "," << s.x.x << "," << s.x.y << "," << s.value.phi << "," << s.value.e.x << ","
        << s.value.e.y << "," << (s.inside ? 1 : 0) << "\n";
  }
}

}  // namespace hdg
