#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <span>
#include <vector>

#include "hdg/basis.hpp"
#include "hdg/local_ops.hpp"
#include "hdg/mesh.hpp"

namespace hdg {

/// Global numbering of the skeleton trace unknowns and conductor potentials.
///
/// Skeleton face f (in Mesh2D::interior_faces() order) owns the contiguous
/// block [f*N_fp, (f+1)*N_fp); its nodes run from Face::vertices[0] to
/// Face::vertices[1]. Conductor eta takes index N_f*N_fp + eta - 1.
class TraceDofMap {
 public:
  TraceDofMap() = default;
  TraceDofMap(const Mesh2D& mesh, const ReferenceElement& ref);

  int nodes_per_face() const { return nfp_; }
  int num_trace_dofs() const { return num_trace_; }
  int num_conductors() const { return num_conductors_; }
  int num_dofs() const { return num_trace_ + num_conductors_; }
  int conductor_dof(int eta) const { return num_trace_ + eta - 1; }
  /// First dof of mesh face `face`, or -1 when the face is not on the skeleton.
  int face_offset(int face) const { return face_offset_[face]; }

  /// Global index for each local coupling column of element k (-1 = none).
  const std::vector<int>& element_dofs(int k) const { return element_dofs_[k]; }

  /// Physical location of trace dof i (i < num_trace_dofs()).
  Point trace_node(int i) const { return trace_nodes_[i]; }

 private:
  int nfp_ = 0;
  int num_trace_ = 0;
  int num_conductors_ = 0;
  std::vector<int> face_offset_;
  std::vector<std::vector<int>> element_dofs_;
  std::vector<Point> trace_nodes_;
};

inline TraceDofMap build_dof_map(const Mesh2D& mesh, const ReferenceElement& ref) {
  return TraceDofMap(mesh, ref);
}

/// Unknown count of the equivalent DG discretization: K * N_p * (1 + d), d = 2.
long long dg_unknown_count(const Mesh2D& mesh, int order);

struct GlobalTraceSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  int num_conductors = 0;

  int num_dofs() const { return static_cast<int>(matrix.rows()); }
  long long nonzeros() const { return matrix.nonZeros(); }
};

/// Sums the condensed element contributions into the trace system and puts
/// the prescribed charges on the conductor rows.
GlobalTraceSystem assemble_global(std::span<const CondensedSystem> condensed,
                                  const TraceDofMap& dofs, const ProblemData& data);

/// max|A - A^T| / max|A|.
double symmetry_defect(const Eigen::SparseMatrix<double>& a);

/// Coordinate dump: header "N_dof nnz", then one "row col value" line per
/// stored entry (0-based, column-major order).
void write_matrix_coordinate(const GlobalTraceSystem& system, std::ostream& out);

}  // namespace hdg
