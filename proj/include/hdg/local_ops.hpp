#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "hdg/basis.hpp"
#include "hdg/mesh.hpp"

namespace hdg {

using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Point(Point)>;

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical data of an electrostatic problem on a given mesh.
///
/// Units: permittivity [F/m], source [C/m^3], Dirichlet data [V], Neumann data
/// is the prescribed outward n.(eps E) [C/m^2], charges [C/m] per unit depth.
/// `charges[i]` is the total charge of conductor i+1 (outward flux of eps E
/// through the conductor surface).
struct ProblemData {
  std::vector<double> permittivity;
  ScalarField source;
  std::map<int, ScalarField> dirichlet;
  std::map<int, ScalarField> neumann;
  std::vector<double> charges;
  double tau0 = 1.0;

  /// Uniform permittivity on every element of `mesh`.
  static ProblemData uniform(const Mesh2D& mesh, double eps);

  /// Throws AssemblyError naming the first inconsistency with `mesh`.
  void validate(const Mesh2D& mesh) const;
};

/// Conductor indices touched by element k, ascending (columns after the
/// 3*N_fp trace columns of the local coupling block).
std::vector<int> element_conductors(const Mesh2D& mesh, int k);

/// tau0 / h_k with h_k the shortest edge of element k.
double stabilization_tau(const Mesh2D& mesh, int k, double tau0);

/// Element block system. Local unknowns are ordered [phi, E_x, E_y], N_p each.
/// Coupling columns: N_fp per local face (zero for faces off the skeleton),
/// then one column per touched conductor.
struct LocalSystem {
  int element = -1;
  double tau = 0.0;
  std::vector<int> conductors;
  Eigen::MatrixXd A;
  Eigen::MatrixXd A_bar;
  Eigen::MatrixXd A_tilde;
  Eigen::MatrixXd A_hat;
  Eigen::VectorXd F;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;

  int num_local() const { return static_cast<int>(A.rows()); }
  int num_coupling() const { return static_cast<int>(A_bar.cols()); }

  /// [phi; E] = A^{-1} (F - A_bar * coupling).
  Eigen::VectorXd solve_local(const Eigen::VectorXd& coupling) const;
};

/// Assembles and factorizes the block system of element k. The stabilization
/// used on its faces is eps_k * stabilization_tau(mesh, k, tau0).
LocalSystem assemble_local(const Mesh2D& mesh, const ReferenceElement& ref, int k,
                           const ProblemData& data);

struct CondensedSystem {
  int element = -1;
  Eigen::MatrixXd S;
  Eigen::VectorXd g;
};

/// S = A_hat - A_tilde A^{-1} A_bar and g = A_tilde A^{-1} F.
CondensedSystem condense(const LocalSystem& local);

}  // namespace hdg
