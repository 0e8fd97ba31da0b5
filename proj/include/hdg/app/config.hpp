#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdg/linear_solver.hpp"
#include "hdg/scenarios.hpp"

namespace hdg::app {

/// Invalid run configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineSpec {
  std::string name;
  Point from;
  Point to;
  int samples = 201;
};

struct MeshFileSpec {
  std::filesystem::path path;
  double permittivity = 1.0;
  double source = 0.0;
  std::map<int, double> dirichlet;
  std::map<int, double> neumann;
};

struct RunConfig {
  enum class ScenarioType { Coaxial, ManufacturedSquare, TwoPlate, MeshFile };

  ScenarioType scenario = ScenarioType::Coaxial;
  CoaxialSpec coaxial;
  AnnulusResolution annulus;
  double square_permittivity = 1.0;
  int square_n = 8;
  TwoPlateSpec two_plate;
  MeshFileSpec mesh_file;

  int order = 2;
  double tau0 = 1.0;
  std::optional<std::vector<double>> charges;  // C/m

  bool write_vtk = true;
  std::vector<LineSpec> lines;

  SolverOptions solver;
  bool condition_estimate = false;

  int convergence_levels = 4;
};

std::string scenario_name(RunConfig::ScenarioType type);

/// Parses and validates a JSON configuration. Relative mesh paths are
/// resolved against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Builds the scenario for refinement level `level` (resolution doubled per level).
Scenario make_scenario(const RunConfig& config, int level = 0);

}  // namespace hdg::app
