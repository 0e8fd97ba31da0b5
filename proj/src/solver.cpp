#include "hdg/solver.hpp"

#include <chrono>

namespace hdg {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<LocalSystem> assemble_locals(const Discretization& disc) {
  disc.data.validate(*disc.mesh);
  std::vector<LocalSystem> locals;
  locals.reserve(disc.mesh->num_elements());
  for (std::size_t k = 0; k < disc.mesh->num_elements(); ++k) {
    locals.push_back(assemble_local(*disc.mesh, disc.ref, static_cast<int>(k), disc.data));
  }
  return locals;
}

GlobalTraceSystem assemble_trace_system(const Discretization& disc,
                                        const std::vector<LocalSystem>& locals) {
  std::vector<CondensedSystem> condensed;
  condensed.reserve(locals.size());
  for (const auto& ls : locals) condensed.push_back(condense(ls));
  return assemble_global(condensed, disc.dofs, disc.data);
}

SolveResult solve_problem(std::shared_ptr<const Mesh2D> mesh, int order, ProblemData data,
                          const SolverOptions& options) {
  SolveResult out(std::move(mesh), order, std::move(data));
  auto t0 = std::chrono::steady_clock::now();
  out.locals = assemble_locals(out.disc);
  out.timings.local_assembly = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  out.system = assemble_trace_system(out.disc, out.locals);
  out.timings.global_assembly = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  out.report = solve_spd(out.system, options);
  out.timings.solve = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  out.solution = recover_local_fields(out.locals, out.report.x, out.disc.dofs, order,
                                      out.disc.data.tau0);
  out.timings.recovery = seconds_since(t0);
  return out;
}

}  // namespace hdg
