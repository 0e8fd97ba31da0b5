#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "hdg/discretization.hpp"

namespace hdg {

/// Discrete fields after the trace solve. Nodal arrays are N_p x K.
struct Solution {
  int order = 0;
  double tau0 = 0.0;
  Eigen::VectorXd trace;
  std::vector<double> conductor_potentials;
  Eigen::MatrixXd phi;
  Eigen::MatrixXd ex;
  Eigen::MatrixXd ey;
};

/// Per-element back substitution [phi; E] = A^{-1}(F - A_bar x_k).
Solution recover_local_fields(std::span<const LocalSystem> locals, const Eigen::VectorXd& x,
                              const TraceDofMap& dofs, int order, double tau0);

/// Charge of conductor eta: integral over its surface of n_c.(eps E), n_c
/// pointing out of the conductor (into the meshed domain).
double conductor_charge(const Discretization& disc, const Solution& sol, int eta);

/// Outward numerical flux integral of n.(eps E)* over Dirichlet and Neumann faces.
double outer_boundary_flux(const Discretization& disc, const Solution& sol);

struct TransmissionResidual {
  /// Per skeleton face: max |row residual| of the global trace equation over its nodes.
  std::vector<double> weak;
  /// Per skeleton face: max over quadrature points of |n+.(eps E)+ + n-.(eps E)-|.
  std::vector<double> strong;
  /// Per conductor: recovered charge minus prescribed charge.
  std::vector<double> charge;
  double max_weak = 0.0;
  double max_strong = 0.0;
};

TransmissionResidual transmission_residual(const Discretization& disc, const Solution& sol);

/// max over the surface nodes of conductor eta of |phi_k - phi_c|.
double equipotential_deviation(const Discretization& disc, const Solution& sol, int eta);

struct FieldValue {
  double phi = 0.0;
  Point e;
};

/// Element containing p (lowest index on ties), or nullopt.
std::optional<int> locate_element(const Mesh2D& mesh, Point p);

FieldValue evaluate_in_element(const Discretization& disc, const Solution& sol, int k, Point p);

struct LineSample {
  double s = 0.0;
  Point x;
  bool inside = false;
  int element = -1;
  FieldValue value;
};

/// n_samples equispaced points on [a, b]. Samples outside the mesh (for example
/// inside a conductor hole) have inside = false and NaN values.
std::vector<LineSample> evaluate_line(const Discretization& disc, const Solution& sol, Point a,
                                      Point b, int n_samples);

struct L2Errors {
  double phi = 0.0;
  double e = 0.0;
};

L2Errors l2_error(const Discretization& disc, const Solution& sol, const ScalarField& phi_exact,
                  const VectorField& e_exact);

}  // namespace hdg
