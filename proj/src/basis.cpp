#include "hdg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hdg {

namespace {

double jacobi_gamma0(double alpha, double beta) {
  return std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) * std::tgamma(alpha + 1.0) *
         std::tgamma(beta + 1.0) / std::tgamma(alpha + beta + 1.0);
}

double grad_jacobi_p(double x, double alpha, double beta, int n) {
  if (n == 0) return 0.0;
  return std::sqrt(n * (n + alpha + beta + 1.0)) * jacobi_p(x, alpha + 1.0, beta + 1.0, n - 1);
}

// Gauss-Lobatto points for weight (1-x)^0 (1+x)^0, n+1 points including +-1.
std::vector<double> gauss_lobatto(int n) {
  std::vector<double> x{-1.0};
  if (n > 1) {
    std::vector<double> xi, wi;
    gauss_jacobi(n - 1, 1.0, 1.0, xi, wi);
    x.insert(x.end(), xi.begin(), xi.end());
  }
  x.push_back(1.0);
  return x;
}

// Warp function of the warp & blend node construction.
double warp_factor(int n, double r) {
  const auto lgl = gauss_lobatto(n);
  double warp = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double ri = -1.0 + 2.0 * i / n;
    double li = 1.0;
    for (int j = 0; j <= n; ++j) {
      if (j != i) li *= (r - (-1.0 + 2.0 * j / n)) / (ri - (-1.0 + 2.0 * j / n));
    }
    warp += li * (lgl[i] - ri);
  }
  if (std::abs(r) < 1.0 - 1e-10) warp /= (1.0 - r * r);
  return warp;
}

std::vector<Point> lattice_nodes(int p) {
  std::vector<Point> nodes;
  for (int j = 0; j <= p; ++j) {
    for (int i = 0; i <= p - j; ++i) nodes.push_back({double(i) / p, double(j) / p});
  }
  return nodes;
}

std::vector<Point> warp_blend_nodes(int p) {
  static constexpr double kAlphaOpt[] = {0.0,    0.0,    1.4152, 0.1001, 0.2751,
                                         0.9800, 1.0999, 1.2832, 1.3648, 1.4773};
  const double alpha = kAlphaOpt[p - 1];
  const double sqrt3 = std::sqrt(3.0);
  std::vector<Point> nodes;
  for (int j = 0; j <= p; ++j) {
    for (int i = 0; i <= p - j; ++i) {
      // Barycentric: L1 at vertex (0,1), L2 at (0,0), L3 at (1,0).
      const double l1 = double(j) / p;
      const double l3 = double(i) / p;
      const double l2 = 1.0 - l1 - l3;
      double x = -l2 + l3;
      double y = (-l2 - l3 + 2.0 * l1) / sqrt3;

      const double b1 = 4.0 * l2 * l3, b2 = 4.0 * l1 * l3, b3 = 4.0 * l1 * l2;
      const double w1 = b1 * warp_factor(p, l3 - l2) * (1.0 + (alpha * l1) * (alpha * l1));
      const double w2 = b2 * warp_factor(p, l1 - l3) * (1.0 + (alpha * l2) * (alpha * l2));
      const double w3 = b3 * warp_factor(p, l2 - l1) * (1.0 + (alpha * l3) * (alpha * l3));
      x += w1 + std::cos(2.0 * std::numbers::pi / 3.0) * w2 +
           std::cos(4.0 * std::numbers::pi / 3.0) * w3;
      y += std::sin(2.0 * std::numbers::pi / 3.0) * w2 +
           std::sin(4.0 * std::numbers::pi / 3.0) * w3;

      // Equilateral -> unit triangle via barycentrics.
      const double m1 = (sqrt3 * y + 1.0) / 3.0;
      const double m3 = (3.0 * x - sqrt3 * y + 2.0) / 6.0;
      nodes.push_back({m3, m1});
    }
  }
  return nodes;
}

// Collapsed coordinates of a unit-triangle point.
void to_collapsed(Point pt, double& a, double& b) {
  const double r = 2.0 * pt.x - 1.0;
  const double s = 2.0 * pt.y - 1.0;
  a = (std::abs(s - 1.0) > 1e-14) ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
  b = s;
}

}  // namespace

double jacobi_p(double x, double alpha, double beta, int n) {
  const double gamma0 = jacobi_gamma0(alpha, beta);
  const double p0 = 1.0 / std::sqrt(gamma0);
  if (n == 0) return p0;
  const double gamma1 = (alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0) * gamma0;
  double p1 = ((alpha + beta + 2.0) * x / 2.0 + (alpha - beta) / 2.0) / std::sqrt(gamma1);
  if (n == 1) return p1;
  double pm1 = p0;
  double aold = 2.0 / (2.0 + alpha + beta) *
                std::sqrt((alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    const double anew = 2.0 / (h1 + 2.0) *
                        std::sqrt((i + 1.0) * (i + 1.0 + alpha + beta) * (i + 1.0 + alpha) *
                                  (i + 1.0 + beta) / (h1 + 1.0) / (h1 + 3.0));
    const double bnew = -(alpha * alpha - beta * beta) / h1 / (h1 + 2.0);
    const double pnext = (-aold * pm1 + (x - bnew) * p1) / anew;
    pm1 = p1;
    p1 = pnext;
    aold = anew;
  }
  return p1;
}

void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& x,
                  std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi needs at least one point");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  jac(0, 0) = (beta - alpha) / (alpha + beta + 2.0);
  for (int i = 1; i < n; ++i) {
    const double h = 2.0 * i + alpha + beta;
    jac(i, i) = (beta * beta - alpha * alpha) / (h * (h + 2.0));
    const double b = 2.0 / h *
                     std::sqrt(i * (i + alpha + beta) * (i + alpha) * (i + beta) /
                               ((h - 1.0) * (h + 1.0)));
    jac(i - 1, i) = jac(i, i - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  const double mu0 = std::pow(2.0, alpha + beta + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(alpha + beta + 2.0);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = eig.eigenvalues()(i);
    const double v = eig.eigenvectors()(0, i);
    w[i] = mu0 * v * v;
  }
}

LineQuadrature gauss_legendre(int n) {
  std::vector<double> x, w;
  gauss_jacobi(n, 0.0, 0.0, x, w);
  LineQuadrature q;
  for (int i = 0; i < n; ++i) {
    q.points.push_back(0.5 * (x[i] + 1.0));
    q.weights.push_back(0.5 * w[i]);
  }
  return q;
}

TriangleQuadrature triangle_quadrature(int degree) {
  const int n = std::max(1, (degree + 3) / 2);  // 2n - 2 >= degree
  const auto g = gauss_legendre(n);
  TriangleQuadrature q;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xi = g.points[i];
      const double eta = g.points[j];
      q.points.push_back({xi * (1.0 - eta), eta});
      q.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - eta));
    }
  }
  return q;
}

ReferenceElement::ReferenceElement(int order) : order_(order) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw std::out_of_range("polynomial order " + std::to_string(order) + " outside [" +
                            std::to_string(kMinOrder) + ", " + std::to_string(kMaxOrder) + "]");
  }
  nodes_ = order <= 3 ? lattice_nodes(order) : warp_blend_nodes(order);

  const double tol = 1e-10;
  for (int f = 0; f < 3; ++f) {
    std::vector<std::pair<double, int>> on_face;
    for (int i = 0; i < num_nodes(); ++i) {
      const Point p = nodes_[i];
      double dist = 0.0, t = 0.0;
      if (f == 0) dist = std::abs(p.y), t = p.x;
      if (f == 1) dist = std::abs(p.x + p.y - 1.0), t = p.y;
      if (f == 2) dist = std::abs(p.x), t = 1.0 - p.y;
      if (dist < tol) on_face.push_back({t, i});
    }
    std::sort(on_face.begin(), on_face.end());
    if (static_cast<int>(on_face.size()) != num_face_nodes()) {
      throw std::logic_error("reference element: wrong number of nodes on face");
    }
    for (const auto& [t, i] : on_face) {
      face_nodes_[f].push_back(i);
      if (f == 0) edge_params_.push_back(t);
    }
  }
  // Snap face nodes exactly onto their edges and check the edge parameters agree.
  for (int f = 0; f < 3; ++f) {
    for (int m = 0; m < num_face_nodes(); ++m) {
      const Point exact = face_point(f, edge_params_[m]);
      Point& node = nodes_[face_nodes_[f][m]];
      if (norm(node - exact) > tol) throw std::logic_error("reference element: asymmetric face nodes");
      node = exact;
    }
  }

  volume_quad_ = triangle_quadrature(2 * order + 2);
  edge_quad_ = gauss_legendre(order + 2);

  vandermonde_ = modal(nodes_);
  inv_vandermonde_ = vandermonde_.inverse();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vandermonde_);
  const auto& sv = svd.singularValues();
  vandermonde_condition_ = sv(0) / sv(sv.size() - 1);

  vol_basis_ = evaluate(volume_quad_.points);
  vol_grad_ = evaluate_gradients(volume_quad_.points);
  for (int f = 0; f < 3; ++f) {
    std::vector<Point> pts;
    for (double t : edge_quad_.points) pts.push_back(face_point(f, t));
    face_basis_[f] = evaluate(pts);
  }
  edge_basis_ = evaluate_edge(edge_quad_.points);
}

int ReferenceElement::lattice_index(int i, int j) const {
  int idx = 0;
  for (int jj = 0; jj < j; ++jj) idx += order_ + 1 - jj;
  return idx + i;
}

Point ReferenceElement::face_point(int face, double t) {
  switch (face) {
    case 0: return {t, 0.0};
    case 1: return {1.0 - t, t};
    default: return {0.0, 1.0 - t};
  }
}

void ReferenceElement::check_inside(std::span<const Point> points) const {
  for (const auto& p : points) {
    if (p.x < -1e-10 || p.y < -1e-10 || 1.0 - p.x - p.y < -1e-10) {
      throw std::domain_error("point outside the reference triangle");
    }
  }
}

Eigen::MatrixXd ReferenceElement::modal(std::span<const Point> points) const {
  const int np = num_nodes();
  Eigen::MatrixXd out(points.size(), np);
  for (std::size_t q = 0; q < points.size(); ++q) {
    double a, b;
    to_collapsed(points[q], a, b);
    int m = 0;
    for (int i = 0; i <= order_; ++i) {
      for (int j = 0; j <= order_ - i; ++j, ++m) {
        out(q, m) = std::sqrt(2.0) * jacobi_p(a, 0, 0, i) * jacobi_p(b, 2 * i + 1, 0, j) *
                    std::pow(1.0 - b, i);
      }
    }
  }
  return out;
}

Eigen::MatrixXd ReferenceElement::evaluate(std::span<const Point> points) const {
  check_inside(points);
  return modal(points) * inv_vandermonde_;
}

std::array<Eigen::MatrixXd, 2> ReferenceElement::evaluate_gradients(
    std::span<const Point> points) const {
  check_inside(points);
  const int np = num_nodes();
  Eigen::MatrixXd dr(points.size(), np), ds(points.size(), np);
  for (std::size_t q = 0; q < points.size(); ++q) {
    double a, b;
    to_collapsed(points[q], a, b);
    int m = 0;
    for (int i = 0; i <= order_; ++i) {
      for (int j = 0; j <= order_ - i; ++j, ++m) {
        const double fa = jacobi_p(a, 0, 0, i);
        const double dfa = grad_jacobi_p(a, 0, 0, i);
        const double gb = jacobi_p(b, 2 * i + 1, 0, j);
        const double dgb = grad_jacobi_p(b, 2 * i + 1, 0, j);
        const double half = 0.5 * (1.0 - b);
        double dmr = dfa * gb;
        double dms = dfa * (gb * 0.5 * (1.0 + a));
        if (i > 0) {
          dmr *= std::pow(half, i - 1);
          dms *= std::pow(half, i - 1);
        }
        double tmp = dgb * std::pow(half, i);
        if (i > 0) tmp -= 0.5 * i * gb * std::pow(half, i - 1);
        dms += fa * tmp;
        const double scale = std::pow(2.0, i + 0.5);
        // d/dx = 2 d/dr on the unit triangle.
        dr(q, m) = 2.0 * scale * dmr;
        ds(q, m) = 2.0 * scale * dms;
      }
    }
  }
  return {dr * inv_vandermonde_, ds * inv_vandermonde_};
}

Eigen::MatrixXd ReferenceElement::evaluate_edge(std::span<const double> t) const {
  const int n = num_face_nodes();
  Eigen::MatrixXd out(t.size(), n);
  for (std::size_t q = 0; q < t.size(); ++q) {
    for (int m = 0; m < n; ++m) {
      double l = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != m) l *= (t[q] - edge_params_[j]) / (edge_params_[m] - edge_params_[j]);
      }
      out(q, m) = l;
    }
  }
  return out;
}

}  // namespace hdg
