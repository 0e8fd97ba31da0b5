#pragma once

#include <memory>
#include <vector>

#include "hdg/discretization.hpp"
#include "hdg/linear_solver.hpp"
#include "hdg/recovery.hpp"

namespace hdg {

struct StageTimings {
  double local_assembly = 0.0;
  double global_assembly = 0.0;
  double solve = 0.0;
  double recovery = 0.0;
};

/// Everything produced by one HDG solve.
struct SolveResult {
  SolveResult(std::shared_ptr<const Mesh2D> mesh, int order, ProblemData data)
      : disc(std::move(mesh), order, std::move(data)) {}

  Discretization disc;
  std::vector<LocalSystem> locals;
  GlobalTraceSystem system;
  SolveReport report;
  Solution solution;
  StageTimings timings;
};

/// Local assembly + condensation for every element.
std::vector<LocalSystem> assemble_locals(const Discretization& disc);
GlobalTraceSystem assemble_trace_system(const Discretization& disc,
                                        const std::vector<LocalSystem>& locals);

/// Full pipeline: assemble, condense, solve the trace system, recover fields.
SolveResult solve_problem(std::shared_ptr<const Mesh2D> mesh, int order, ProblemData data,
                          const SolverOptions& options = {});

}  // namespace hdg
