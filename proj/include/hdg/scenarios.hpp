#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdg/local_ops.hpp"
#include "hdg/mesh.hpp"

namespace hdg {

inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kElementaryCharge = 1.602176634e-19;     // C

/// A mesh plus data, with the exact solution when one is known.
struct Scenario {
  std::string name;
  std::shared_ptr<const Mesh2D> mesh;
  ProblemData data;
  ScalarField exact_phi;
  VectorField exact_e;
  std::vector<double> exact_conductor_potentials;
};

// ---------------------------------------------------------------------------
// Coaxial capacitor with a floating metal tube between r2 and r3.

struct CoaxialSpec {
  double r0 = 0.001;
  double r2 = 0.008;
  double r3 = 0.012;
  double r1 = 0.02;
  double v0 = 0.0;
  double v1 = 10.0;
  double charge = 0.0;  // C/m
  double permittivity = kVacuumPermittivity;
};

/// phi(r) = a0 + b0 ln r on [r0, r2], a1 + b1 ln r on [r3, r1].
///
/// From phi(r0) = V0, phi(r1) = V1, equal potential phi_c at r2 and r3, and
/// the tube charge 2 pi eps (b0 - b1) = Q:
///   b1 = (V1 - V0 - C20 Q / (2 pi eps)) / (C20 - C31),  C_ij = ln(r_i / r_j)
///   b0 = b1 + Q / (2 pi eps),  a0 = V0 - b0 ln r0,  a1 = V1 - b1 ln r1.
struct AnalyticCoaxial {
  double a0 = 0.0, b0 = 0.0, a1 = 0.0, b1 = 0.0;
  double conductor_potential = 0.0;
  CoaxialSpec spec;

  /// Potential at radius r; NaN inside the tube or outside [r0, r1].
  double potential(double r) const;
  /// Radial field E_r = -dphi/dr; NaN where potential() is.
  double radial_field(double r) const;
};

AnalyticCoaxial analytic_coaxial(const CoaxialSpec& spec);

Scenario coaxial_scenario(const CoaxialSpec& spec, const AnnulusResolution& res);

// ---------------------------------------------------------------------------
// phi = sin(pi x) sin(pi y) on the unit square, homogeneous Dirichlet.

struct ManufacturedSquare {
  double permittivity = 1.0;

  double phi(Point p) const;
  Point field(Point p) const;  // E = -grad phi
  double source(Point p) const;  // rho = -div(eps grad phi)
};

ManufacturedSquare manufactured_square(double permittivity = 1.0);

Scenario manufactured_square_scenario(int n, double permittivity = 1.0);

// ---------------------------------------------------------------------------
// Unit square with a floating square plate [a,b]^2 and
//   phi = c + amplitude (x-a)(x-b)(y-a)(y-b),
// constant (= c) on the plate. Its charge is 2 eps amplitude (b-a)^4 / 3.
// Exact on the polygonal mesh, so rates are not limited by geometry.

struct ManufacturedPlate {
  double a = 0.375;
  double b = 0.625;
  double c = 0.5;
  double amplitude = 1.0;
  double permittivity = 1.0;

  double phi(Point p) const;
  Point field(Point p) const;
  double source(Point p) const;
  double charge() const;
};

/// n x n cells of the unit square (n a multiple of 8 keeps the plate on grid
/// lines); Dirichlet marker 1 carries the exact potential.
Scenario manufactured_plate_scenario(int n, const ManufacturedPlate& mp = {});

// ---------------------------------------------------------------------------
// Rectangle, 0 V on the left, V_right on the right, insulated top and bottom,
// with floating plates inside.

struct TwoPlateSpec {
  double width = 1.0;
  double height = 1.0;
  int nx = 20;
  int ny = 20;
  double v_left = 0.0;
  double v_right = 10.0;
  double permittivity = kVacuumPermittivity;
  std::vector<PlateSpec> plates{{0.25, 0.3, 0.35, 0.7}, {0.65, 0.3, 0.75, 0.7}};
  std::vector<double> charges{0.0, 0.0};
};

/// Dirichlet markers: 1 left, 2 right; Neumann marker 1 top and bottom.
Scenario two_plate_fpc_scenario(const TwoPlateSpec& spec = {});

}  // namespace hdg
