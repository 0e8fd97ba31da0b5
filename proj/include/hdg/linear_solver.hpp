#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <stdexcept>
#include <string>

#include "hdg/assembly.hpp"

namespace hdg {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  enum class Method { Auto, Cholesky, ConjugateGradient };

  Method method = Method::Auto;
  /// Auto switches to CG above this many unknowns.
  int direct_limit = 1'500'000;
  /// Acceptance threshold on ||Ax - b|| / ||b||.
  double residual_tolerance = 1e-10;
  /// CG stopping tolerance (relative residual).
  double cg_tolerance = 1e-12;
  /// CG iteration cap is cg_iteration_factor * sqrt(N).
  double cg_iteration_factor = 50.0;
};

struct SolveReport {
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  std::string method;
  bool used_fallback = false;
  int cg_iterations = 0;
};

/// Sparse SPD solve: AMD-ordered Cholesky, with Jacobi-preconditioned CG as
/// fallback. Throws SolverError when the matrix is not positive definite or
/// the residual tolerance is missed.
SolveReport solve_spd(const GlobalTraceSystem& system, const SolverOptions& options = {});

/// Reusable sparse Cholesky factorization.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const Eigen::SparseMatrix<double>& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                       Eigen::AMDOrdering<int>>
      llt_;
};

struct ConditionEstimate {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double kappa = 0.0;
  bool converged = false;
  int iterations_max = 0;
  int iterations_min = 0;
};

/// Extreme eigenvalues by Lanczos: on A for lambda_max, on A^{-1} (through the
/// Cholesky factor) for lambda_min. `tolerance` bounds the relative Ritz
/// residual; converged=false when max_iterations operator applications run out.
ConditionEstimate condition_estimate(const GlobalTraceSystem& system, double tolerance = 1e-8,
                                     int max_iterations = 2000);

}  // namespace hdg
