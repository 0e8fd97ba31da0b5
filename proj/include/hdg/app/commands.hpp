#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hdg/app/config.hpp"

namespace hdg::app {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kConfigError = 2, kSolverFailure = 3 };

struct CommandOptions {
  std::filesystem::path output_dir = ".";
  bool quiet = false;
  bool dump_matrix = false;
  int order = 0;  // info on a bare mesh; 0 = use default
};

/// Writes summary.json, field.vtk (optional), line CSVs and optionally matrix.txt.
void run_solve(const RunConfig& config, const CommandOptions& opts, std::ostream& log);

struct ConvergenceRow {
  double h = 0.0;
  long long dofs = 0;
  double err_phi = 0.0;
  double err_e = 0.0;
  double fpc_abs_err = 0.0;
};

/// Runs convergence_levels refinements; writes convergence.csv.
std::vector<ConvergenceRow> run_convergence(const RunConfig& config, const CommandOptions& opts,
                                            std::ostream& log);

/// Count report for a mesh or configuration file, as JSON text.
std::string run_info(const std::filesystem::path& path, const CommandOptions& opts);

/// Entry point used by the executable; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hdg::app
