#include "hdg/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <Eigen/Eigenvalues>

namespace hdg {

namespace {

double relative_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double bn = b.norm();
  const double rn = (a * x - b).norm();
  return bn > 0.0 ? rn / bn : rn;
}

Eigen::VectorXd start_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + 0.7 * double(i));
  return v.normalized();
}

struct EigenEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest eigenvalue of a symmetric positive operator by restarted Lanczos with
// full reorthogonalization. Stops when the Ritz residual |beta_m s_m| falls
// below tolerance * theta; `max_iterations` bounds the operator applications.
template <class Apply>
EigenEstimate largest_eigenvalue(Apply apply, Eigen::Index n, double tolerance,
                                 int max_iterations) {
  const int basis_cap = static_cast<int>(std::min<Eigen::Index>(n, 80));
  EigenEstimate out;
  Eigen::VectorXd start = start_vector(n);
  while (out.iterations < max_iterations) {
    Eigen::MatrixXd q(n, basis_cap);
    Eigen::VectorXd alpha(basis_cap), beta(basis_cap);
    q.col(0) = start;
    int m = 0;
    double theta = 0.0, residual = 0.0;
    Eigen::VectorXd ritz;
    for (; m < basis_cap && out.iterations < max_iterations; ++m) {
      Eigen::VectorXd w = apply(q.col(m));
      ++out.iterations;
      alpha(m) = q.col(m).dot(w);
      // Two passes of Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        w -= q.leftCols(m + 1) * (q.leftCols(m + 1).transpose() * w);
      }
      beta(m) = w.norm();

      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, m + 1);
      for (int i = 0; i <= m; ++i) {
        t(i, i) = alpha(i);
        if (i < m) t(i, i + 1) = t(i + 1, i) = beta(i);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      theta = es.eigenvalues()(m);
      ritz = es.eigenvectors().col(m);
      residual = std::abs(beta(m) * ritz(m));
      if (residual <= tolerance * std::abs(theta) || beta(m) <= 1e-14 * std::abs(theta) ||
          m + 1 == n) {
        out.value = theta;
        out.converged = true;
        return out;
      }
      if (m + 1 < basis_cap) q.col(m + 1) = w / beta(m);
    }
    out.value = theta;
    start = (q.leftCols(m) * ritz.head(m)).normalized();
  }
  return out;
}

}  // namespace

CholeskyFactor::CholeskyFactor(const Eigen::SparseMatrix<double>& a) {
  llt_.compute(a);
  if (llt_.info() != Eigen::Success) {
    throw SolverError("sparse Cholesky failed: matrix is not positive definite");
  }
}

Eigen::VectorXd CholeskyFactor::solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

SolveReport solve_spd(const GlobalTraceSystem& system, const SolverOptions& options) {
  const auto& a = system.matrix;
  const auto& b = system.rhs;
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw SolverError("system dimensions are inconsistent");
  }
  SolveReport report;
  if (a.rows() == 0) {
    report.x = Eigen::VectorXd();
    report.method = "empty";
    return report;
  }
  if (b.norm() == 0.0) {
    report.x = Eigen::VectorXd::Zero(a.rows());
    report.method = "trivial";
    return report;
  }

  const bool direct = options.method == SolverOptions::Method::Cholesky ||
                      (options.method == SolverOptions::Method::Auto &&
                       a.rows() <= options.direct_limit);
  std::string direct_failure;
  if (direct) {
    try {
      CholeskyFactor factor(a);
      report.x = factor.solve(b);
      report.method = "cholesky";
      report.relative_residual = relative_residual(a, report.x, b);
      if (report.relative_residual <= options.residual_tolerance) return report;
      direct_failure = "Cholesky residual " + std::to_string(report.relative_residual);
    } catch (const SolverError& e) {
      direct_failure = e.what();
    }
    if (options.method == SolverOptions::Method::Cholesky) throw SolverError(direct_failure);
    report.used_fallback = true;
  }

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(options.cg_tolerance);
  cg.setMaxIterations(static_cast<Eigen::Index>(
      std::ceil(options.cg_iteration_factor * std::sqrt(double(a.rows())))));
  cg.compute(a);
  report.x = cg.solve(b);
  report.cg_iterations = static_cast<int>(cg.iterations());
  report.method = "cg";
  report.relative_residual = relative_residual(a, report.x, b);
  if (cg.info() != Eigen::Success || !(report.relative_residual <= options.residual_tolerance)) {
    std::string msg = "conjugate gradient did not converge (relative residual " +
                      std::to_string(report.relative_residual) + " after " +
                      std::to_string(report.cg_iterations) + " iterations)";
    if (!direct_failure.empty()) msg = direct_failure + "; " + msg;
    throw SolverError(msg);
  }
  return report;
}

ConditionEstimate condition_estimate(const GlobalTraceSystem& system, double tolerance,
                                     int max_iterations) {
  const auto& a = system.matrix;
  if (a.rows() == 0) throw SolverError("empty system");
  ConditionEstimate est;
  const CholeskyFactor factor(a);

  const auto up = largest_eigenvalue(
      [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(a * v); }, a.rows(), tolerance,
      max_iterations);
  const auto down = largest_eigenvalue([&](const Eigen::VectorXd& v) { return factor.solve(v); },
                                       a.rows(), tolerance, max_iterations);
  est.lambda_max = up.value;
  est.lambda_min = 1.0 / down.value;
  est.kappa = est.lambda_max / est.lambda_min;
  est.iterations_max = up.iterations;
  est.iterations_min = down.iterations;
  est.converged = up.converged && down.converged;
  return est;
}

}  // namespace hdg
