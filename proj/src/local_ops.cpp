#include "hdg/local_ops.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace hdg {

ProblemData ProblemData::uniform(const Mesh2D& mesh, double eps) {
  ProblemData d;
  d.permittivity.assign(mesh.num_elements(), eps);
  d.charges.assign(static_cast<std::size_t>(mesh.conductor_count()), 0.0);
  return d;
}

void ProblemData::validate(const Mesh2D& mesh) const {
  if (permittivity.size() != mesh.num_elements()) {
    throw AssemblyError("permittivity has " + std::to_string(permittivity.size()) +
                        " entries for " + std::to_string(mesh.num_elements()) + " elements");
  }
  for (std::size_t k = 0; k < permittivity.size(); ++k) {
    if (!(permittivity[k] > 0.0)) {
      throw AssemblyError("permittivity of element " + std::to_string(k) + " is not positive");
    }
  }
  if (!(tau0 > 0.0)) throw AssemblyError("tau0 must be positive");
  const auto m = static_cast<std::size_t>(mesh.conductor_count());
  if (charges.size() != m) {
    throw AssemblyError("mesh has " + std::to_string(m) + " conductors but " +
                        std::to_string(charges.size()) + " charges were given");
  }
  for (const auto& f : mesh.faces()) {
    if (f.tag.kind == BoundaryTag::Kind::Dirichlet && !dirichlet.contains(f.tag.id)) {
      throw AssemblyError("no Dirichlet data for marker " + std::to_string(f.tag.id));
    }
    if (f.tag.kind == BoundaryTag::Kind::Neumann && !neumann.contains(f.tag.id)) {
      throw AssemblyError("no Neumann data for marker " + std::to_string(f.tag.id));
    }
  }
}

std::vector<int> element_conductors(const Mesh2D& mesh, int k) {
  std::set<int> ids;
  for (int f : mesh.element_faces(k)) {
    const auto& tag = mesh.faces()[f].tag;
    if (tag.is_floating()) ids.insert(tag.id);
  }
  return {ids.begin(), ids.end()};
}

double stabilization_tau(const Mesh2D& mesh, int k, double tau0) {
  if (!(tau0 > 0.0)) throw std::invalid_argument("tau0 must be positive");
  return tau0 / mesh.shortest_edge(k);
}

Eigen::VectorXd LocalSystem::solve_local(const Eigen::VectorXd& coupling) const {
  return lu.solve(F - A_bar * coupling);
}

LocalSystem assemble_local(const Mesh2D& mesh, const ReferenceElement& ref, int k,
                           const ProblemData& data) {
  const int np = ref.num_nodes();
  const int nfp = ref.num_face_nodes();
  const double eps = data.permittivity.at(k);

  LocalSystem ls;
  ls.element = k;
  ls.tau = eps * stabilization_tau(mesh, k, data.tau0);
  ls.conductors = element_conductors(mesh, k);
  const int ncoup = 3 * nfp + static_cast<int>(ls.conductors.size());
  ls.A = Eigen::MatrixXd::Zero(3 * np, 3 * np);
  ls.A_bar = Eigen::MatrixXd::Zero(3 * np, ncoup);
  ls.A_hat = Eigen::MatrixXd::Zero(ncoup, ncoup);
  ls.F = Eigen::VectorXd::Zero(3 * np);

  const auto v = mesh.element_vertices(k);
  const Point e1 = v[1] - v[0];
  const Point e2 = v[2] - v[0];
  const double det = cross(e1, e2);

  // Volume terms.
  const auto& vq = ref.volume_quadrature();
  const Eigen::MatrixXd& phi = ref.basis_at_volume_quadrature();
  const auto& grad = ref.gradients_at_volume_quadrature();
  const Eigen::MatrixXd dx = (e2.y * grad[0] - e1.y * grad[1]) / det;
  Eigen::VectorXd w(vq.weights.size());
  for (std::size_t q = 0; q < vq.weights.size(); ++q) w(q) = vq.weights[q] * det;

  const Eigen::MatrixXd mass = phi.transpose() * w.asDiagonal() * phi;
  const Eigen::MatrixXd div_x = phi.transpose() * w.asDiagonal() * dx;
  const Eigen::MatrixXd dy = (-e2.x * grad[0] + e1.x * grad[1]) / det;
  const Eigen::MatrixXd div_y = phi.transpose() * w.asDiagonal() * dy;

  ls.A.block(0, np, np, np) += eps * div_x;
  ls.A.block(0, 2 * np, np, np) += eps * div_y;
  ls.A.block(np, 0, np, np) += eps * div_x.transpose();
  ls.A.block(2 * np, 0, np, np) += eps * div_y.transpose();
  ls.A.block(np, np, np, np) -= eps * mass;
  ls.A.block(2 * np, 2 * np, np, np) -= eps * mass;

  if (data.source) {
    Eigen::VectorXd rho(vq.points.size());
    for (std::size_t q = 0; q < vq.points.size(); ++q) {
      const Point ref_pt = vq.points[q];
      rho(q) = data.source(v[0] + ref_pt.x * e1 + ref_pt.y * e2);
    }
    ls.F.head(np) += phi.transpose() * w.asDiagonal() * rho;
  }

  // Face terms.
  const auto& eq = ref.edge_quadrature();
  const Eigen::MatrixXd& trace = ref.edge_basis_at_edge_quadrature();
  for (int l = 0; l < 3; ++l) {
    const Face& face = mesh.faces()[mesh.element_faces(k)[l]];
    const Point a = v[l];
    const Point b = v[(l + 1) % 3];
    const double len = norm(b - a);
    const Point n = mesh.outward_normal(k, l);
    const Eigen::MatrixXd& bf = ref.basis_at_face_quadrature(l);

    Eigen::VectorXd wf(eq.weights.size());
    for (std::size_t q = 0; q < eq.weights.size(); ++q) wf(q) = eq.weights[q] * len;
    auto data_at_quad = [&](const ScalarField& g) {
      Eigen::VectorXd out(eq.points.size());
      for (std::size_t q = 0; q < eq.points.size(); ++q) out(q) = g(a + eq.points[q] * (b - a));
      return out;
    };

    switch (face.tag.kind) {
      case BoundaryTag::Kind::Interior: {
        const Eigen::MatrixXd face_mass = bf.transpose() * wf.asDiagonal() * bf;
        const Eigen::MatrixXd coupling = bf.transpose() * wf.asDiagonal() * trace;
        ls.A.block(0, 0, np, np) += ls.tau * face_mass;
        ls.A_bar.block(0, l * nfp, np, nfp) -= ls.tau * coupling;
        ls.A_bar.block(np, l * nfp, np, nfp) -= eps * n.x * coupling;
        ls.A_bar.block(2 * np, l * nfp, np, nfp) -= eps * n.y * coupling;
        ls.A_hat.block(l * nfp, l * nfp, nfp, nfp) +=
            ls.tau * trace.transpose() * wf.asDiagonal() * trace;
        break;
      }
      case BoundaryTag::Kind::Dirichlet: {
        const Eigen::MatrixXd face_mass = bf.transpose() * wf.asDiagonal() * bf;
        ls.A.block(0, 0, np, np) += ls.tau * face_mass;
        const Eigen::VectorXd g = data_at_quad(data.dirichlet.at(face.tag.id));
        const Eigen::VectorXd lg = bf.transpose() * wf.asDiagonal() * g;
        ls.F.head(np) += ls.tau * lg;
        ls.F.segment(np, np) += eps * n.x * lg;
        ls.F.segment(2 * np, np) += eps * n.y * lg;
        break;
      }
      case BoundaryTag::Kind::Neumann: {
        const Eigen::MatrixXd face_mass = bf.transpose() * wf.asDiagonal() * bf;
        ls.A.block(0, np, np, np) -= eps * n.x * face_mass;
        ls.A.block(0, 2 * np, np, np) -= eps * n.y * face_mass;
        ls.A.block(np, 0, np, np) -= eps * n.x * face_mass;
        ls.A.block(2 * np, 0, np, np) -= eps * n.y * face_mass;
        const Eigen::VectorXd g = data_at_quad(data.neumann.at(face.tag.id));
        ls.F.head(np) -= bf.transpose() * wf.asDiagonal() * g;
        break;
      }
      case BoundaryTag::Kind::Floating: {
        const auto pos = std::find(ls.conductors.begin(), ls.conductors.end(), face.tag.id);
        const int col = 3 * nfp + static_cast<int>(pos - ls.conductors.begin());
        const Eigen::VectorXd lint = bf.transpose() * wf;
        ls.A_bar.block(np, col, np, 1) -= eps * n.x * lint;
        ls.A_bar.block(2 * np, col, np, 1) -= eps * n.y * lint;
        break;
      }
    }
  }

  ls.A_tilde = ls.A_bar.transpose();
  ls.lu.compute(ls.A);
  if (!(ls.lu.rcond() > 1e-14)) {
    throw AssemblyError("local system of element " + std::to_string(k) +
                        " is singular (degenerate element or tau0 <= 0)");
  }
  return ls;
}

CondensedSystem condense(const LocalSystem& local) {
  if (local.lu.matrixLU().size() == 0) {
    throw AssemblyError("element " + std::to_string(local.element) + " has no factorization");
  }
  CondensedSystem cs;
  cs.element = local.element;
  const Eigen::MatrixXd inv_bar = local.lu.solve(local.A_bar);
  cs.S = local.A_hat - local.A_tilde * inv_bar;
  cs.g = local.A_tilde * local.lu.solve(local.F);
  return cs;
}

}  // namespace hdg
