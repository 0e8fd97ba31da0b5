#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "hdg/mesh.hpp"

namespace hdg {

inline constexpr int kMinOrder = 1;
inline constexpr int kMaxOrder = 6;

/// Points and weights of a rule on the unit triangle (0,0),(1,0),(0,1).
/// Weights sum to 1/2.
struct TriangleQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// Points and weights on [0, 1]; weights sum to 1.
struct LineQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Gauss-Jacobi points/weights on [-1, 1] for weight (1-x)^alpha (1+x)^beta.
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& x, std::vector<double>& w);
LineQuadrature gauss_legendre(int n);
/// Collapsed (Duffy) Gauss rule, exact for total degree <= `degree`.
TriangleQuadrature triangle_quadrature(int degree);

/// Normalized Jacobi polynomial P_n^{(alpha,beta)} on [-1, 1].
double jacobi_p(double x, double alpha, double beta, int n);

/// Order-p nodal Lagrange element on the unit triangle.
///
/// Nodes are stored in lattice order: row j (0..p, bottom to top), entry i
/// (0..p-j, left to right), index = sum_{jj<j}(p+1-jj) + i. For p <= 3 the
/// lattice is equidistant; for p >= 4 the warp & blend construction is used
/// and edge nodes are Gauss-Lobatto points.
///
/// Local face l joins reference vertices l and l+1 (mod 3), with vertices
/// (0,0), (1,0), (0,1). face_nodes(l) lists the volume nodes on that face,
/// ordered from vertex l towards vertex l+1; their edge parameters are
/// edge_parameters().
class ReferenceElement {
 public:
  explicit ReferenceElement(int order);

  int order() const { return order_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_face_nodes() const { return order_ + 1; }
  static constexpr int num_faces() { return 3; }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<double>& edge_parameters() const { return edge_params_; }
  const std::vector<int>& face_nodes(int face) const { return face_nodes_[face]; }
  int lattice_index(int i, int j) const;

  const TriangleQuadrature& volume_quadrature() const { return volume_quad_; }
  const LineQuadrature& edge_quadrature() const { return edge_quad_; }

  /// Generalized Vandermonde V(i, j) = psi_j(node_i) for the orthonormal modal basis.
  const Eigen::MatrixXd& vandermonde() const { return vandermonde_; }
  double vandermonde_condition() const { return vandermonde_condition_; }

  /// Rows: points; columns: nodal basis functions.
  Eigen::MatrixXd evaluate(std::span<const Point> points) const;
  /// {d/dx, d/dy} of the nodal basis; same layout as evaluate().
  std::array<Eigen::MatrixXd, 2> evaluate_gradients(std::span<const Point> points) const;
  /// 1D Lagrange basis on edge_parameters(), evaluated at t in [0, 1].
  Eigen::MatrixXd evaluate_edge(std::span<const double> t) const;

  /// Reference point at parameter t along face l.
  static Point face_point(int face, double t);

  // Tabulations at the quadrature points, reused by assembly.
  const Eigen::MatrixXd& basis_at_volume_quadrature() const { return vol_basis_; }
  const std::array<Eigen::MatrixXd, 2>& gradients_at_volume_quadrature() const { return vol_grad_; }
  const Eigen::MatrixXd& basis_at_face_quadrature(int face) const { return face_basis_[face]; }
  const Eigen::MatrixXd& edge_basis_at_edge_quadrature() const { return edge_basis_; }

 private:
  Eigen::MatrixXd modal(std::span<const Point> points) const;
  void check_inside(std::span<const Point> points) const;

  int order_;
  std::vector<Point> nodes_;
  std::vector<double> edge_params_;
  std::array<std::vector<int>, 3> face_nodes_;
  TriangleQuadrature volume_quad_;
  LineQuadrature edge_quad_;
  Eigen::MatrixXd vandermonde_;
  Eigen::MatrixXd inv_vandermonde_;
  double vandermonde_condition_ = 0.0;
  Eigen::MatrixXd vol_basis_;
  std::array<Eigen::MatrixXd, 2> vol_grad_;
  std::array<Eigen::MatrixXd, 3> face_basis_;
  Eigen::MatrixXd edge_basis_;
};

inline ReferenceElement build_reference_element(int order) { return ReferenceElement(order); }

/// Nodes per element / per face for order p.
constexpr int nodes_per_element(int p) { return (p + 1) * (p + 2) / 2; }
constexpr int nodes_per_face(int p) { return p + 1; }

}  // namespace hdg
