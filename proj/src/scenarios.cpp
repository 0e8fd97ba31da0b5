#include "hdg/scenarios.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hdg {

using std::numbers::pi;

double AnalyticCoaxial::potential(double r) const {
  if (r >= spec.r0 && r <= spec.r2) return a0 + b0 * std::log(r);
  if (r >= spec.r3 && r <= spec.r1) return a1 + b1 * std::log(r);
  return std::numeric_limits<double>::quiet_NaN();
}

double AnalyticCoaxial::radial_field(double r) const {
  if (r >= spec.r0 && r <= spec.r2) return -b0 / r;
  if (r >= spec.r3 && r <= spec.r1) return -b1 / r;
  return std::numeric_limits<double>::quiet_NaN();
}

AnalyticCoaxial analytic_coaxial(const CoaxialSpec& spec) {
  if (!(0.0 < spec.r0 && spec.r0 < spec.r2 && spec.r2 < spec.r3 && spec.r3 < spec.r1)) {
    throw std::invalid_argument("coaxial radii must satisfy 0 < r0 < r2 < r3 < r1");
  }
  if (!(spec.permittivity > 0.0)) throw std::invalid_argument("permittivity must be positive");
  const double c20 = std::log(spec.r2 / spec.r0);
  const double c31 = std::log(spec.r3 / spec.r1);
  if (c20 == c31) throw std::invalid_argument("degenerate coaxial geometry (C20 == C31)");
  const double q = spec.charge / (2.0 * pi * spec.permittivity);

  AnalyticCoaxial out;
  out.spec = spec;
  out.b1 = (spec.v1 - spec.v0 - c20 * q) / (c20 - c31);
  out.b0 = out.b1 + q;
  out.a0 = spec.v0 - out.b0 * std::log(spec.r0);
  out.a1 = spec.v1 - out.b1 * std::log(spec.r1);
  out.conductor_potential = out.a0 + out.b0 * std::log(spec.r2);
  return out;
}

Scenario coaxial_scenario(const CoaxialSpec& spec, const AnnulusResolution& res) {
  const AnalyticCoaxial exact = analytic_coaxial(spec);
  Scenario sc;
  sc.name = "coaxial";
  sc.mesh = std::make_shared<const Mesh2D>(
      generate_annulus_with_fpc(spec.r0, spec.r2, spec.r3, spec.r1, res));
  sc.data = ProblemData::uniform(*sc.mesh, spec.permittivity);
  const double v0 = spec.v0, v1 = spec.v1;
  sc.data.dirichlet[1] = [v0](Point) { return v0; };
  sc.data.dirichlet[2] = [v1](Point) { return v1; };
  sc.data.charges = {spec.charge};
  // The polygonal mesh pokes slightly past the circles; continue each log
  // profile over its own annulus so the error integrand is defined everywhere.
  const double r_mid = 0.5 * (spec.r2 + spec.r3);
  sc.exact_phi = [exact, r_mid](Point p) {
    const double r = norm(p);
    return r < r_mid ? exact.a0 + exact.b0 * std::log(r) : exact.a1 + exact.b1 * std::log(r);
  };
  sc.exact_e = [exact, r_mid](Point p) {
    const double r = norm(p);
    const double er = r < r_mid ? -exact.b0 / r : -exact.b1 / r;
    return Point{er * p.x / r, er * p.y / r};
  };
  sc.exact_conductor_potentials = {exact.conductor_potential};
  return sc;
}

double ManufacturedSquare::phi(Point p) const { return std::sin(pi * p.x) * std::sin(pi * p.y); }

Point ManufacturedSquare::field(Point p) const {
  return {-pi * std::cos(pi * p.x) * std::sin(pi * p.y),
          -pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
}

double ManufacturedSquare::source(Point p) const { return 2.0 * pi * pi * permittivity * phi(p); }

ManufacturedSquare manufactured_square(double permittivity) {
  if (!(permittivity > 0.0)) throw std::invalid_argument("permittivity must be positive");
  return ManufacturedSquare{permittivity};
}

Scenario manufactured_square_scenario(int n, double permittivity) {
  const ManufacturedSquare ms = manufactured_square(permittivity);
  Scenario sc;
  sc.name = "manufactured_square";
  sc.mesh = std::make_shared<const Mesh2D>(generate_unit_square(n));
  sc.data = ProblemData::uniform(*sc.mesh, permittivity);
  sc.data.source = [ms](Point p) { return ms.source(p); };
  sc.data.dirichlet[1] = [](Point) { return 0.0; };
  sc.exact_phi = [ms](Point p) { return ms.phi(p); };
  sc.exact_e = [ms](Point p) { return ms.field(p); };
  return sc;
}

double ManufacturedPlate::phi(Point p) const {
  return c + amplitude * (p.x - a) * (p.x - b) * (p.y - a) * (p.y - b);
}

Point ManufacturedPlate::field(Point p) const {
  const double sx = (p.x - a) * (p.x - b), sy = (p.y - a) * (p.y - b);
  const double dsx = 2.0 * p.x - a - b, dsy = 2.0 * p.y - a - b;
  return {-amplitude * dsx * sy, -amplitude * sx * dsy};
}

double ManufacturedPlate::source(Point p) const {
  const double sx = (p.x - a) * (p.x - b), sy = (p.y - a) * (p.y - b);
  return -permittivity * amplitude * 2.0 * (sx + sy);
}

double ManufacturedPlate::charge() const {
  return 2.0 * permittivity * amplitude * std::pow(b - a, 4) / 3.0;
}

Scenario manufactured_plate_scenario(int n, const ManufacturedPlate& mp) {
  if (!(0.0 < mp.a && mp.a < mp.b && mp.b < 1.0)) {
    throw std::invalid_argument("plate must satisfy 0 < a < b < 1");
  }
  if (!(mp.permittivity > 0.0)) throw std::invalid_argument("permittivity must be positive");
  Scenario sc;
  sc.name = "manufactured_plate";
  sc.mesh = std::make_shared<const Mesh2D>(
      generate_rect_with_fpc_plates(1.0, 1.0, n, n, {{mp.a, mp.a, mp.b, mp.b}}, RectSides{}));
  sc.data = ProblemData::uniform(*sc.mesh, mp.permittivity);
  sc.data.source = [mp](Point p) { return mp.source(p); };
  sc.data.dirichlet[1] = [mp](Point p) { return mp.phi(p); };
  sc.data.charges = {mp.charge()};
  sc.exact_phi = [mp](Point p) { return mp.phi(p); };
  sc.exact_e = [mp](Point p) { return mp.field(p); };
  sc.exact_conductor_potentials = {mp.c};
  return sc;
}

Scenario two_plate_fpc_scenario(const TwoPlateSpec& spec) {
  if (spec.charges.size() != spec.plates.size()) {
    throw std::invalid_argument("two_plate: one charge per plate is required");
  }
  RectSides sides;
  sides.left = BoundaryTag::dirichlet(1);
  sides.right = BoundaryTag::dirichlet(2);
  sides.bottom = BoundaryTag::neumann(1);
  sides.top = BoundaryTag::neumann(1);

  Scenario sc;
  sc.name = "two_plate";
  sc.mesh = std::make_shared<const Mesh2D>(
      generate_rect_with_fpc_plates(spec.width, spec.height, spec.nx, spec.ny, spec.plates, sides));
  sc.data = ProblemData::uniform(*sc.mesh, spec.permittivity);
  const double vl = spec.v_left, vr = spec.v_right;
  sc.data.dirichlet[1] = [vl](Point) { return vl; };
  sc.data.dirichlet[2] = [vr](Point) { return vr; };
  sc.data.neumann[1] = [](Point) { return 0.0; };
  sc.data.charges = spec.charges;
  if (spec.plates.empty()) {
    const double w = spec.width;
    sc.exact_phi = [vl, vr, w](Point p) { return vl + (vr - vl) * p.x / w; };
    sc.exact_e = [vl, vr, w](Point) { return Point{-(vr - vl) / w, 0.0}; };
  }
  return sc;
}

}  // namespace hdg
