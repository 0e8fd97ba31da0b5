#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hdg/scenarios.hpp"
#include "hdg/solver.hpp"

using namespace hdg;
using std::numbers::pi;

namespace {

// Direct 4x4 solve of the coaxial conditions for (a0, b0, a1, b1).
Eigen::Vector4d coaxial_by_linear_solve(const CoaxialSpec& s) {
  Eigen::Matrix4d m;
  Eigen::Vector4d rhs;
  m << 1, std::log(s.r0), 0, 0,                              // phi(r0) = V0
      0, 0, 1, std::log(s.r1),                               // phi(r1) = V1
      1, std::log(s.r2), -1, -std::log(s.r3),                // phi(r2) = phi(r3)
      0, 2 * pi * s.permittivity, 0, -2 * pi * s.permittivity;  // tube charge
  rhs << s.v0, s.v1, 0.0, s.charge;
  return m.fullPivLu().solve(rhs);
}

double fd_laplacian(const ScalarField& f, Point x, double h) {
  return (f({x.x + h, x.y}) + f({x.x - h, x.y}) + f({x.x, x.y + h}) + f({x.x, x.y - h}) -
          4 * f(x)) /
         (h * h);
}

}  // namespace

TEST(Coaxial, CoefficientsMatchLinearSolve) {
  for (double q : {0.0, -1e10 * kElementaryCharge, 3e-9}) {
    for (double v0 : {0.0, 2.0}) {
      CoaxialSpec s;
      s.charge = q;
      s.v0 = v0;
      const auto exact = analytic_coaxial(s);
      const Eigen::Vector4d ref = coaxial_by_linear_solve(s);
      EXPECT_NEAR(exact.a0, ref(0), 1e-9 * std::abs(ref(0)) + 1e-12);
      EXPECT_NEAR(exact.b0, ref(1), 1e-9 * std::abs(ref(1)) + 1e-12);
      EXPECT_NEAR(exact.a1, ref(2), 1e-9 * std::abs(ref(2)) + 1e-12);
      EXPECT_NEAR(exact.b1, ref(3), 1e-9 * std::abs(ref(3)) + 1e-12);
    }
  }
}

TEST(Coaxial, BoundaryAndContinuity) {
  CoaxialSpec s;
  s.charge = -1e10 * kElementaryCharge;
  const auto e = analytic_coaxial(s);
  EXPECT_NEAR(e.potential(s.r0), s.v0, 1e-12);
  EXPECT_NEAR(e.potential(s.r1), s.v1, 1e-12);
  EXPECT_NEAR(e.potential(s.r2), e.conductor_potential, 1e-12);
  EXPECT_NEAR(e.potential(s.r3), e.conductor_potential, 1e-12);
  EXPECT_TRUE(std::isnan(e.potential(0.5 * (s.r2 + s.r3))));
  EXPECT_TRUE(std::isnan(e.potential(2 * s.r1)));
  // Radial field is -dphi/dr.
  const double r = 0.015, h = 1e-7;
  EXPECT_NEAR(e.radial_field(r), -(e.potential(r + h) - e.potential(r - h)) / (2 * h), 1e-5);
  // Gauss: 2 pi r eps (E_r outside - E_r inside) at the tube = Q.
  const double jump =
      2 * pi * s.permittivity * (s.r3 * e.radial_field(s.r3) - s.r2 * e.radial_field(s.r2));
  EXPECT_NEAR(jump, s.charge, 1e-12 * std::abs(s.charge));
}

TEST(Coaxial, AffineInData) {
  CoaxialSpec s0;
  s0.v0 = 0;
  s0.v1 = 0;
  s0.charge = 0;
  CoaxialSpec s1 = s0, s2 = s0, s12 = s0;
  s1.v0 = 1.5;
  s1.charge = 2e-10;
  s2.v1 = -4.0;
  s2.charge = -7e-10;
  s12.v0 = 1.5;
  s12.v1 = -4.0;
  s12.charge = 2e-10 - 7e-10;
  const auto e0 = analytic_coaxial(s0), e1 = analytic_coaxial(s1), e2 = analytic_coaxial(s2),
             e12 = analytic_coaxial(s12);
  for (double r : {0.002, 0.005, 0.013, 0.019}) {
    EXPECT_NEAR(e12.potential(r), e1.potential(r) + e2.potential(r) - e0.potential(r), 1e-12);
  }
}

TEST(Coaxial, RejectsBadInput) {
  CoaxialSpec s;
  s.r2 = 0.02;
  EXPECT_THROW(analytic_coaxial(s), std::invalid_argument);
  s = {};
  s.permittivity = 0;
  EXPECT_THROW(analytic_coaxial(s), std::invalid_argument);
}

TEST(Coaxial, ScenarioWiring) {
  const Scenario sc = coaxial_scenario({}, {16, 2, 2});
  EXPECT_EQ(sc.mesh->conductor_count(), 1);
  ASSERT_EQ(sc.data.charges.size(), 1u);
  EXPECT_NO_THROW(sc.data.validate(*sc.mesh));
  EXPECT_NEAR(sc.exact_phi({0.001, 0.0}), 0.0, 1e-12);
  EXPECT_NEAR(sc.exact_phi({0.0, 0.02}), 10.0, 1e-12);
}

TEST(Manufactured, SourceIsMinusLaplacian) {
  const auto ms = manufactured_square(2.0);
  for (Point x : {Point{0.3, 0.7}, Point{0.5, 0.5}, Point{0.11, 0.92}}) {
    EXPECT_NEAR(ms.source(x), -2.0 * fd_laplacian([&](Point p) { return ms.phi(p); }, x, 1e-4), 1e-5);
    const double h = 1e-6;
    EXPECT_NEAR(ms.field(x).x, -(ms.phi({x.x + h, x.y}) - ms.phi({x.x - h, x.y})) / (2 * h), 1e-7);
  }
  EXPECT_NEAR(ms.phi({0.0, 0.4}), 0.0, 1e-15);
  EXPECT_THROW(manufactured_square(0.0), std::invalid_argument);
}

TEST(Manufactured, PlateDataIsConsistent) {
  ManufacturedPlate mp;
  mp.permittivity = 1.7;
  mp.amplitude = 3.0;
  auto phi = [&](Point p) { return mp.phi(p); };
  for (Point x : {Point{0.2, 0.1}, Point{0.8, 0.45}}) {
    EXPECT_NEAR(mp.source(x), -mp.permittivity * fd_laplacian(phi, x, 1e-4), 1e-5);
  }
  // Constant on the plate surface.
  for (double t : {0.0, 0.3, 1.0}) {
    const double s = mp.a + t * (mp.b - mp.a);
    EXPECT_DOUBLE_EQ(mp.phi({mp.a, s}), mp.c);
    EXPECT_DOUBLE_EQ(mp.phi({s, mp.b}), mp.c);
  }
  // Charge: integral of n_c.(eps E) around the plate, n_c pointing out of it.
  const auto gl = gauss_legendre(6);
  double q = 0.0;
  const double w = mp.b - mp.a;
  for (std::size_t i = 0; i < gl.points.size(); ++i) {
    const double s = mp.a + gl.points[i] * w;
    q += gl.weights[i] * w * mp.permittivity *
         (-mp.field({mp.a, s}).x + mp.field({mp.b, s}).x - mp.field({s, mp.a}).y +
          mp.field({s, mp.b}).y);
  }
  EXPECT_NEAR(q, mp.charge(), 1e-14);
}

TEST(TwoPlate, WithoutPlatesIsLinear) {
  TwoPlateSpec spec;
  spec.plates.clear();
  spec.charges.clear();
  spec.nx = spec.ny = 4;
  spec.permittivity = 1.0;
  const Scenario sc = two_plate_fpc_scenario(spec);
  const auto r = solve_problem(sc.mesh, 1, sc.data);
  const auto err = l2_error(r.disc, r.solution, sc.exact_phi, sc.exact_e);
  EXPECT_LT(err.phi, 1e-11);
  EXPECT_LT(err.e, 1e-10);
}

TEST(TwoPlate, MirrorSymmetry) {
  // Plates placed symmetrically about x = 1/2: phi(1 - x) = V_left + V_right - phi(x).
  const Scenario sc = two_plate_fpc_scenario();
  const auto r = solve_problem(sc.mesh, 2, sc.data);
  ASSERT_EQ(r.solution.conductor_potentials.size(), 2u);
  EXPECT_NEAR(r.solution.conductor_potentials[0] + r.solution.conductor_potentials[1], 10.0, 1e-9);
  EXPECT_GT(r.solution.conductor_potentials[0], 0.0);
  EXPECT_LT(r.solution.conductor_potentials[0], 5.0);
  EXPECT_THROW(two_plate_fpc_scenario(TwoPlateSpec{.charges = {0.0}}), std::invalid_argument);
}
