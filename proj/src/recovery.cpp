#include "hdg/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hdg {

Solution recover_local_fields(std::span<const LocalSystem> locals, const Eigen::VectorXd& x,
                              const TraceDofMap& dofs, int order, double tau0) {
  if (x.size() != dofs.num_dofs()) throw AssemblyError("trace vector has the wrong size");
  const int np = nodes_per_element(order);
  Solution sol;
  sol.order = order;
  sol.tau0 = tau0;
  sol.trace = x.head(dofs.num_trace_dofs());
  for (int eta = 1; eta <= dofs.num_conductors(); ++eta) {
    sol.conductor_potentials.push_back(x(dofs.conductor_dof(eta)));
  }
  const auto n_el = static_cast<Eigen::Index>(locals.size());
  sol.phi.resize(np, n_el);
  sol.ex.resize(np, n_el);
  sol.ey.resize(np, n_el);
  for (const auto& ls : locals) {
    if (ls.lu.matrixLU().size() == 0) {
      throw AssemblyError("missing factorization for element " + std::to_string(ls.element));
    }
    const auto& map = dofs.element_dofs(ls.element);
    Eigen::VectorXd xk = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.size()));
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (map[i] >= 0) xk(static_cast<Eigen::Index>(i)) = x(map[i]);
    }
    const Eigen::VectorXd u = ls.solve_local(xk);
    sol.phi.col(ls.element) = u.segment(0, np);
    sol.ex.col(ls.element) = u.segment(np, np);
    sol.ey.col(ls.element) = u.segment(2 * np, np);
  }
  return sol;
}

namespace {

struct FaceQuad {
  Eigen::VectorXd w;       // weights times length
  std::vector<Point> pts;  // physical points
  Point n;
};

FaceQuad face_quad(const Discretization& disc, int k, int l) {
  const auto v = disc.mesh->element_vertices(k);
  const Point a = v[l], b = v[(l + 1) % 3];
  const auto& eq = disc.ref.edge_quadrature();
  FaceQuad fq;
  fq.n = disc.mesh->outward_normal(k, l);
  fq.w.resize(static_cast<Eigen::Index>(eq.weights.size()));
  const double len = norm(b - a);
  for (std::size_t q = 0; q < eq.weights.size(); ++q) {
    fq.w(static_cast<Eigen::Index>(q)) = eq.weights[q] * len;
    fq.pts.push_back(a + eq.points[q] * (b - a));
  }
  return fq;
}

// n.(eps E) at the face quadrature points of local face l of element k.
Eigen::VectorXd normal_flux(const Discretization& disc, const Solution& sol, int k, int l) {
  const Eigen::MatrixXd& bf = disc.ref.basis_at_face_quadrature(l);
  const Point n = disc.mesh->outward_normal(k, l);
  return disc.data.permittivity[k] * (n.x * (bf * sol.ex.col(k)) + n.y * (bf * sol.ey.col(k)));
}

Point to_reference(const Mesh2D& mesh, int k, Point p) {
  const auto v = mesh.element_vertices(k);
  const Point e1 = v[1] - v[0], e2 = v[2] - v[0], d = p - v[0];
  const double det = cross(e1, e2);
  return {cross(d, e2) / det, cross(e1, d) / det};
}

}  // namespace

double conductor_charge(const Discretization& disc, const Solution& sol, int eta) {
  const auto& mesh = *disc.mesh;
  if (eta < 1 || eta > mesh.conductor_count()) {
    throw std::out_of_range("conductor index " + std::to_string(eta) + " out of range");
  }
  double q = 0.0;
  for (const auto& f : mesh.faces()) {
    if (!(f.tag.is_floating() && f.tag.id == eta)) continue;
    const int k = f.elements[0], l = f.local_index[0];
    q -= face_quad(disc, k, l).w.dot(normal_flux(disc, sol, k, l));
  }
  return q;
}

double outer_boundary_flux(const Discretization& disc, const Solution& sol) {
  const auto& mesh = *disc.mesh;
  double flux = 0.0;
  for (const auto& f : mesh.faces()) {
    const auto kind = f.tag.kind;
    if (kind != BoundaryTag::Kind::Dirichlet && kind != BoundaryTag::Kind::Neumann) continue;
    const int k = f.elements[0], l = f.local_index[0];
    const FaceQuad fq = face_quad(disc, k, l);
    Eigen::VectorXd g(fq.w.size());
    if (kind == BoundaryTag::Kind::Neumann) {
      for (Eigen::Index q = 0; q < g.size(); ++q) g(q) = disc.data.neumann.at(f.tag.id)(fq.pts[q]);
    } else {
      const double tau = disc.data.permittivity[k] * stabilization_tau(mesh, k, disc.data.tau0);
      const Eigen::VectorXd phi = disc.ref.basis_at_face_quadrature(l) * sol.phi.col(k);
      g = normal_flux(disc, sol, k, l);
      for (Eigen::Index q = 0; q < g.size(); ++q) {
        g(q) += tau * (phi(q) - disc.data.dirichlet.at(f.tag.id)(fq.pts[q]));
      }
    }
    flux += fq.w.dot(g);
  }
  return flux;
}

TransmissionResidual transmission_residual(const Discretization& disc, const Solution& sol) {
  const auto& mesh = *disc.mesh;
  const auto& ref = disc.ref;
  const int nfp = ref.num_face_nodes();
  const Eigen::MatrixXd& trace_basis = ref.edge_basis_at_edge_quadrature();

  TransmissionResidual res;
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(disc.dofs.num_trace_dofs());
  std::vector<Eigen::VectorXd> side_flux(mesh.num_faces());
  for (std::size_t ke = 0; ke < mesh.num_elements(); ++ke) {
    const int k = static_cast<int>(ke);
    const double tau = disc.data.permittivity[k] * stabilization_tau(mesh, k, disc.data.tau0);
    const auto& map = disc.dofs.element_dofs(k);
    for (int l = 0; l < 3; ++l) {
      const int f = mesh.element_faces(k)[l];
      if (disc.dofs.face_offset(f) < 0) continue;
      const FaceQuad fq = face_quad(disc, k, l);
      const Eigen::VectorXd flux = normal_flux(disc, sol, k, l);
      const Eigen::VectorXd phi = ref.basis_at_face_quadrature(l) * sol.phi.col(k);
      Eigen::VectorXd xk(nfp);
      for (int m = 0; m < nfp; ++m) xk(m) = sol.trace(map[l * nfp + m]);
      const Eigen::VectorXd phi_hat = trace_basis * xk;
      const Eigen::VectorXd integrand = -tau * phi - flux + tau * phi_hat;
      const Eigen::VectorXd r = trace_basis.transpose() * fq.w.asDiagonal() * integrand;
      for (int m = 0; m < nfp; ++m) rows(map[l * nfp + m]) += r(m);

      // Quadrature points of the two sides run in opposite directions.
      if (side_flux[f].size() == 0) {
        side_flux[f] = flux;
      } else {
        side_flux[f] += flux.reverse();
      }
    }
  }
  for (int f : mesh.interior_faces()) {
    const int off = disc.dofs.face_offset(f);
    const double weak = rows.segment(off, nfp).cwiseAbs().maxCoeff();
    const double strong = side_flux[f].cwiseAbs().maxCoeff();
    res.weak.push_back(weak);
    res.strong.push_back(strong);
    res.max_weak = std::max(res.max_weak, weak);
    res.max_strong = std::max(res.max_strong, strong);
  }
  for (int eta = 1; eta <= mesh.conductor_count(); ++eta) {
    res.charge.push_back(conductor_charge(disc, sol, eta) - disc.data.charges[eta - 1]);
  }
  return res;
}

double equipotential_deviation(const Discretization& disc, const Solution& sol, int eta) {
  const auto& mesh = *disc.mesh;
  if (eta < 1 || eta > mesh.conductor_count()) {
    throw std::out_of_range("conductor index " + std::to_string(eta) + " out of range");
  }
  const double phic = sol.conductor_potentials[eta - 1];
  double dev = 0.0;
  for (const auto& f : mesh.faces()) {
    if (!(f.tag.is_floating() && f.tag.id == eta)) continue;
    const int k = f.elements[0], l = f.local_index[0];
    for (int node : disc.ref.face_nodes(l)) dev = std::max(dev, std::abs(sol.phi(node, k) - phic));
  }
  return dev;
}

std::optional<int> locate_element(const Mesh2D& mesh, Point p) {
  for (std::size_t ke = 0; ke < mesh.num_elements(); ++ke) {
    const int k = static_cast<int>(ke);
    const auto v = mesh.element_vertices(k);
    const double xmin = std::min({v[0].x, v[1].x, v[2].x}), xmax = std::max({v[0].x, v[1].x, v[2].x});
    const double ymin = std::min({v[0].y, v[1].y, v[2].y}), ymax = std::max({v[0].y, v[1].y, v[2].y});
    const double pad = 1e-12 * std::max(xmax - xmin, ymax - ymin);
    if (p.x < xmin - pad || p.x > xmax + pad || p.y < ymin - pad || p.y > ymax + pad) continue;
    const Point r = to_reference(mesh, k, p);
    const double tol = 1e-12;
    if (r.x >= -tol && r.y >= -tol && 1.0 - r.x - r.y >= -tol) return k;
  }
  return std::nullopt;
}

FieldValue evaluate_in_element(const Discretization& disc, const Solution& sol, int k, Point p) {
  Point r = to_reference(*disc.mesh, k, p);
  // Clamp round-off so boundary points stay in the reference triangle.
  r.x = std::max(r.x, 0.0);
  r.y = std::max(r.y, 0.0);
  if (r.x + r.y > 1.0) {
    const double s = r.x + r.y;
    r = {r.x / s, r.y / s};
  }
  const Point pts[] = {r};
  const Eigen::RowVectorXd basis = disc.ref.evaluate(pts).row(0);
  FieldValue out;
  out.phi = basis.dot(sol.phi.col(k));
  out.e = {basis.dot(sol.ex.col(k)), basis.dot(sol.ey.col(k))};
  return out;
}

std::vector<LineSample> evaluate_line(const Discretization& disc, const Solution& sol, Point a,
                                      Point b, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("a line needs at least two samples");
  std::vector<LineSample> out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double length = norm(b - a);
  for (int i = 0; i < n_samples; ++i) {
    const double t = double(i) / (n_samples - 1);
    LineSample s;
    s.s = t * length;
    s.x = a + t * (b - a);
    const auto k = locate_element(*disc.mesh, s.x);
    if (k) {
      s.inside = true;
      s.element = *k;
      s.value = evaluate_in_element(disc, sol, *k, s.x);
    } else {
      s.value = {nan, {nan, nan}};
    }
    out.push_back(s);
  }
  return out;
}

L2Errors l2_error(const Discretization& disc, const Solution& sol, const ScalarField& phi_exact,
                  const VectorField& e_exact) {
  const auto& mesh = *disc.mesh;
  const auto& vq = disc.ref.volume_quadrature();
  const Eigen::MatrixXd& basis = disc.ref.basis_at_volume_quadrature();
  double ephi = 0.0, ee = 0.0;
  for (std::size_t ke = 0; ke < mesh.num_elements(); ++ke) {
    const int k = static_cast<int>(ke);
    const auto v = mesh.element_vertices(k);
    const double det = 2.0 * mesh.element_area(k);
    const Eigen::VectorXd phi = basis * sol.phi.col(k);
    const Eigen::VectorXd ex = basis * sol.ex.col(k);
    const Eigen::VectorXd ey = basis * sol.ey.col(k);
    for (std::size_t q = 0; q < vq.points.size(); ++q) {
      const Point r = vq.points[q];
      const Point x = v[0] + r.x * (v[1] - v[0]) + r.y * (v[2] - v[0]);
      const double w = vq.weights[q] * det;
      const auto qi = static_cast<Eigen::Index>(q);
      const double dphi = phi(qi) - phi_exact(x);
      ephi += w * dphi * dphi;
      if (e_exact) {
        const Point ev = e_exact(x);
        ee += w * ((ex(qi) - ev.x) * (ex(qi) - ev.x) + (ey(qi) - ev.y) * (ey(qi) - ev.y));
      }
    }
  }
  return {std::sqrt(ephi), std::sqrt(ee)};
}

}  // namespace hdg
