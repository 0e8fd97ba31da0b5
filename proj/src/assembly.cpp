#include "hdg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace hdg {

TraceDofMap::TraceDofMap(const Mesh2D& mesh, const ReferenceElement& ref)
    : nfp_(ref.num_face_nodes()),
      num_conductors_(mesh.conductor_count()),
      face_offset_(mesh.num_faces(), -1),
      element_dofs_(mesh.num_elements()) {
  const auto& t = ref.edge_parameters();
  for (int f : mesh.interior_faces()) {
    face_offset_[f] = num_trace_;
    const auto& face = mesh.faces()[f];
    const Point a = mesh.vertices()[face.vertices[0]];
    const Point b = mesh.vertices()[face.vertices[1]];
    for (int m = 0; m < nfp_; ++m) trace_nodes_.push_back(a + t[m] * (b - a));
    num_trace_ += nfp_;
  }

  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const int ke = static_cast<int>(k);
    const auto v = mesh.element_vertices(ke);
    auto& dofs = element_dofs_[k];
    dofs.assign(3 * nfp_, -1);
    for (int l = 0; l < 3; ++l) {
      const int f = mesh.element_faces(ke)[l];
      const int offset = face_offset_[f];
      if (offset < 0) continue;
      const Point a = v[l];
      const Point b = v[(l + 1) % 3];
      const double h = norm(b - a);
      const double scale = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y)});
      const double tol = std::max(1e-12 * h, 64 * std::numeric_limits<double>::epsilon() * scale);
      // Match local face nodes to the face's trace nodes by position.
      for (int m = 0; m < nfp_; ++m) {
        const Point p = a + t[m] * (b - a);
        int match = -1;
        for (int j = 0; j < nfp_; ++j) {
          if (norm(p - trace_nodes_[offset + j]) <= tol) {
            match = offset + j;
            break;
          }
        }
        if (match < 0) {
          throw AssemblyError("trace nodes of face " + std::to_string(f) +
                              " do not coincide between its elements");
        }
        dofs[l * nfp_ + m] = match;
      }
    }
    for (int eta : element_conductors(mesh, ke)) dofs.push_back(conductor_dof(eta));
  }
}

long long dg_unknown_count(const Mesh2D& mesh, int order) {
  return static_cast<long long>(mesh.num_elements()) * nodes_per_element(order) * 3;
}

GlobalTraceSystem assemble_global(std::span<const CondensedSystem> condensed,
                                  const TraceDofMap& dofs, const ProblemData& data) {
  const int n = dofs.num_dofs();
  if (static_cast<int>(data.charges.size()) != dofs.num_conductors()) {
    throw AssemblyError("charge list has " + std::to_string(data.charges.size()) +
                        " entries for " + std::to_string(dofs.num_conductors()) + " conductors");
  }

  GlobalTraceSystem sys;
  sys.num_conductors = dofs.num_conductors();
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& cs : condensed) {
    const auto& map = dofs.element_dofs(cs.element);
    if (static_cast<int>(map.size()) != cs.S.rows()) {
      throw AssemblyError("condensed block of element " + std::to_string(cs.element) +
                          " does not match its dof map");
    }
    for (std::size_t i = 0; i < map.size(); ++i) {
      const int gi = map[i];
      if (gi < 0) continue;
      if (gi >= n) throw AssemblyError("global index out of range");
      sys.rhs(gi) -= cs.g(static_cast<Eigen::Index>(i));
      for (std::size_t j = 0; j < map.size(); ++j) {
        if (map[j] < 0) continue;
        triplets.emplace_back(gi, map[j], cs.S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
    }
  }
  for (int eta = 1; eta <= dofs.num_conductors(); ++eta) {
    sys.rhs(dofs.conductor_dof(eta)) += data.charges[eta - 1];
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

double symmetry_defect(const Eigen::SparseMatrix<double>& a) {
  const Eigen::SparseMatrix<double> t = a.transpose();
  const Eigen::SparseMatrix<double> diff = a - t;
  double dmax = 0.0, amax = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it) {
      dmax = std::max(dmax, std::abs(it.value()));
    }
  }
  for (int k = 0; k < a.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      amax = std::max(amax, std::abs(it.value()));
    }
  }
  return amax > 0.0 ? dmax / amax : 0.0;
}

void write_matrix_coordinate(const GlobalTraceSystem& system, std::ostream& out) {
  const auto& a = system.matrix;
  out << a.rows() << " " << a.nonZeros() << "\n" << std::setprecision(17);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
    }
  }
}

}  // namespace hdg
