#include "hdg/app/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace hdg::app {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  require_object(j, path.empty() ? "config" : path);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + join(path, key) + "'");
  }
}

double number(const json& j, const std::string& key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, const std::string& path, int fallback,
            int minimum) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key) + ": expected an integer");
  const int value = v.get<int>();
  if (value < minimum) {
    throw ConfigError(join(path, key) + ": must be >= " + std::to_string(minimum));
  }
  return value;
}

bool boolean(const json& j, const std::string& key, const std::string& path, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(join(path, key) + ": expected true or false");
  return j.at(key).get<bool>();
}

Point point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(path + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::map<int, double> marker_values(const json& j, const std::string& path) {
  require_object(j, path);
  std::map<int, double> out;
  for (const auto& [key, value] : j.items()) {
    int marker = 0;
    std::istringstream ss(key);
    if (!(ss >> marker) || !ss.eof()) throw ConfigError(path + ": marker '" + key + "' is not an integer");
    if (!value.is_number()) throw ConfigError(join(path, key) + ": expected a number");
    out[marker] = value.get<double>();
  }
  return out;
}

void parse_scenario(const json& j, RunConfig& cfg, const std::filesystem::path& base_dir) {
  const std::string path = "scenario";
  require_object(j, path);
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError("scenario.type: required string");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "coaxial") {
    cfg.scenario = RunConfig::ScenarioType::Coaxial;
    check_keys(j, {"type", "r0", "r1", "r2", "r3", "V0", "V1", "permittivity"}, path);
    auto& c = cfg.coaxial;
    c.r0 = number(j, "r0", path, c.r0);
    c.r1 = number(j, "r1", path, c.r1);
    c.r2 = number(j, "r2", path, c.r2);
    c.r3 = number(j, "r3", path, c.r3);
    c.v0 = number(j, "V0", path, c.v0);
    c.v1 = number(j, "V1", path, c.v1);
    c.permittivity = number(j, "permittivity", path, c.permittivity);
    if (!(0.0 < c.r0 && c.r0 < c.r2 && c.r2 < c.r3 && c.r3 < c.r1)) {
      throw ConfigError("scenario: radii must satisfy 0 < r0 < r2 < r3 < r1");
    }
    if (!(c.permittivity > 0.0)) throw ConfigError("scenario.permittivity: must be positive");
  } else if (type == "manufactured_square") {
    cfg.scenario = RunConfig::ScenarioType::ManufacturedSquare;
    check_keys(j, {"type", "permittivity"}, path);
    cfg.square_permittivity = number(j, "permittivity", path, cfg.square_permittivity);
    if (!(cfg.square_permittivity > 0.0)) {
      throw ConfigError("scenario.permittivity: must be positive");
    }
  } else if (type == "two_plate") {
    cfg.scenario = RunConfig::ScenarioType::TwoPlate;
    check_keys(j, {"type", "width", "height", "V_left", "V_right", "permittivity", "plates"}, path);
    auto& t = cfg.two_plate;
    t.width = number(j, "width", path, t.width);
    t.height = number(j, "height", path, t.height);
    t.v_left = number(j, "V_left", path, t.v_left);
    t.v_right = number(j, "V_right", path, t.v_right);
    t.permittivity = number(j, "permittivity", path, t.permittivity);
    if (!(t.permittivity > 0.0)) throw ConfigError("scenario.permittivity: must be positive");
    if (j.contains("plates")) {
      const auto& plates = j.at("plates");
      if (!plates.is_array()) throw ConfigError("scenario.plates: expected an array");
      t.plates.clear();
      for (std::size_t i = 0; i < plates.size(); ++i) {
        const auto& p = plates[i];
        const std::string pp = "scenario.plates[" + std::to_string(i) + "]";
        if (!p.is_array() || p.size() != 4 ||
            !std::all_of(p.begin(), p.end(), [](const json& x) { return x.is_number(); })) {
          throw ConfigError(pp + ": expected [x0, y0, x1, y1]");
        }
        t.plates.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>(),
                            p[3].get<double>()});
      }
    }
    t.charges.assign(t.plates.size(), 0.0);
  } else if (type == "mesh_file") {
    cfg.scenario = RunConfig::ScenarioType::MeshFile;
    check_keys(j, {"type", "path", "permittivity", "source", "dirichlet", "neumann"}, path);
    auto& m = cfg.mesh_file;
    if (!j.contains("path") || !j.at("path").is_string()) {
      throw ConfigError("scenario.path: required string");
    }
    m.path = j.at("path").get<std::string>();
    if (m.path.is_relative() && !base_dir.empty()) m.path = base_dir / m.path;
    m.permittivity = number(j, "permittivity", path, m.permittivity);
    if (!(m.permittivity > 0.0)) throw ConfigError("scenario.permittivity: must be positive");
    m.source = number(j, "source", path, m.source);
    if (j.contains("dirichlet")) m.dirichlet = marker_values(j.at("dirichlet"), "scenario.dirichlet");
    if (j.contains("neumann")) m.neumann = marker_values(j.at("neumann"), "scenario.neumann");
  } else {
    throw ConfigError("scenario.type: unknown scenario '" + type +
                      "' (expected coaxial, manufactured_square, two_plate or mesh_file)");
  }
}

void parse_mesh(const json& j, RunConfig& cfg) {
  const std::string path = "mesh";
  switch (cfg.scenario) {
    case RunConfig::ScenarioType::Coaxial:
      check_keys(j, {"n_azimuthal", "n_radial_inner", "n_radial_outer"}, path);
      cfg.annulus.n_azimuthal = integer(j, "n_azimuthal", path, cfg.annulus.n_azimuthal, 8);
      cfg.annulus.n_radial_inner = integer(j, "n_radial_inner", path, cfg.annulus.n_radial_inner, 1);
      cfg.annulus.n_radial_outer = integer(j, "n_radial_outer", path, cfg.annulus.n_radial_outer, 1);
      break;
    case RunConfig::ScenarioType::ManufacturedSquare:
      check_keys(j, {"n"}, path);
      cfg.square_n = integer(j, "n", path, cfg.square_n, 1);
      break;
    case RunConfig::ScenarioType::TwoPlate:
      check_keys(j, {"nx", "ny"}, path);
      cfg.two_plate.nx = integer(j, "nx", path, cfg.two_plate.nx, 1);
      cfg.two_plate.ny = integer(j, "ny", path, cfg.two_plate.ny, 1);
      break;
    case RunConfig::ScenarioType::MeshFile:
      check_keys(j, {}, path);
      break;
  }
}

std::vector<double> parse_charges(const json& j) {
  auto values = [](const json& arr, const std::string& path) {
    if (!arr.is_array()) throw ConfigError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : arr) {
      if (!v.is_number()) throw ConfigError(path + ": expected an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };
  if (j.is_array()) return values(j, "charges");
  check_keys(j, {"unit", "values"}, "charges");
  if (!j.contains("values")) throw ConfigError("charges.values: required");
  auto out = values(j.at("values"), "charges.values");
  const std::string unit = j.contains("unit") && j.at("unit").is_string()
                               ? j.at("unit").get<std::string>()
                               : std::string("C/m");
  if (unit == "e") {
    for (auto& q : out) q *= kElementaryCharge;
  } else if (unit != "C/m") {
    throw ConfigError("charges.unit: expected \"C/m\" or \"e\"");
  }
  return out;
}

void parse_outputs(const json& j, RunConfig& cfg) {
  check_keys(j, {"vtk", "lines"}, "outputs");
  cfg.write_vtk = boolean(j, "vtk", "outputs", cfg.write_vtk);
  if (!j.contains("lines")) return;
  const auto& lines = j.at("lines");
  if (!lines.is_array()) throw ConfigError("outputs.lines: expected an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string path = "outputs.lines[" + std::to_string(i) + "]";
    const auto& l = lines[i];
    check_keys(l, {"name", "from", "to", "samples"}, path);
    LineSpec spec;
    if (!l.contains("name") || !l.at("name").is_string()) throw ConfigError(path + ".name: required string");
    spec.name = l.at("name").get<std::string>();
    if (spec.name.empty() || spec.name.find_first_of("/\\") != std::string::npos) {
      throw ConfigError(path + ".name: must be a plain file stem");
    }
    if (!names.insert(spec.name).second) throw ConfigError(path + ".name: duplicate line name");
    if (!l.contains("from") || !l.contains("to")) throw ConfigError(path + ": 'from' and 'to' are required");
    spec.from = point(l.at("from"), path + ".from");
    spec.to = point(l.at("to"), path + ".to");
    spec.samples = integer(l, "samples", path, spec.samples, 2);
    cfg.lines.push_back(spec);
  }
}

void parse_solver(const json& j, RunConfig& cfg) {
  check_keys(j, {"method", "condition_estimate", "direct_limit"}, "solver");
  if (j.contains("method")) {
    if (!j.at("method").is_string()) throw ConfigError("solver.method: expected a string");
    const auto m = j.at("method").get<std::string>();
    if (m == "auto") {
      cfg.solver.method = SolverOptions::Method::Auto;
    } else if (m == "cholesky") {
      cfg.solver.method = SolverOptions::Method::Cholesky;
    } else if (m == "cg") {
      cfg.solver.method = SolverOptions::Method::ConjugateGradient;
    } else {
      throw ConfigError("solver.method: expected auto, cholesky or cg");
    }
  }
  cfg.condition_estimate = boolean(j, "condition_estimate", "solver", cfg.condition_estimate);
  cfg.solver.direct_limit = integer(j, "direct_limit", "solver", cfg.solver.direct_limit, 1);
}

}  // namespace

std::string scenario_name(RunConfig::ScenarioType type) {
  switch (type) {
    case RunConfig::ScenarioType::Coaxial: return "coaxial";
    case RunConfig::ScenarioType::ManufacturedSquare: return "manufactured_square";
    case RunConfig::ScenarioType::TwoPlate: return "two_plate";
    case RunConfig::ScenarioType::MeshFile: return "mesh_file";
  }
  return "?";
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  check_keys(j, {"scenario", "mesh", "order", "tau0", "charges", "outputs", "solver", "convergence"},
             "");
  RunConfig cfg;
  if (!j.contains("scenario")) throw ConfigError("scenario: required");
  parse_scenario(j.at("scenario"), cfg, base_dir);
  if (j.contains("mesh")) parse_mesh(j.at("mesh"), cfg);
  cfg.order = integer(j, "order", "", cfg.order, kMinOrder);
  if (cfg.order > kMaxOrder) throw ConfigError("order: must be <= " + std::to_string(kMaxOrder));
  cfg.tau0 = number(j, "tau0", "", cfg.tau0);
  if (!(cfg.tau0 > 0.0)) throw ConfigError("tau0: must be positive");
  if (j.contains("charges")) cfg.charges = parse_charges(j.at("charges"));
  if (j.contains("outputs")) parse_outputs(j.at("outputs"), cfg);
  if (j.contains("solver")) parse_solver(j.at("solver"), cfg);
  if (j.contains("convergence")) {
    check_keys(j.at("convergence"), {"levels"}, "convergence");
    cfg.convergence_levels = integer(j.at("convergence"), "levels", "convergence",
                                     cfg.convergence_levels, 1);
  }
  if (cfg.charges && cfg.scenario == RunConfig::ScenarioType::Coaxial && cfg.charges->size() != 1) {
    throw ConfigError("charges: the coaxial scenario has exactly one conductor");
  }
  if (cfg.charges && cfg.scenario == RunConfig::ScenarioType::ManufacturedSquare &&
      !cfg.charges->empty()) {
    throw ConfigError("charges: manufactured_square has no conductors");
  }
  if (cfg.charges && cfg.scenario == RunConfig::ScenarioType::TwoPlate &&
      cfg.charges->size() != cfg.two_plate.plates.size()) {
    throw ConfigError("charges: expected one charge per plate");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

Scenario make_scenario(const RunConfig& config, int level) {
  const int scale = 1 << level;
  switch (config.scenario) {
    case RunConfig::ScenarioType::Coaxial: {
      CoaxialSpec spec = config.coaxial;
      if (config.charges) spec.charge = config.charges->at(0);
      AnnulusResolution res = config.annulus;
      res.n_azimuthal *= scale;
      res.n_radial_inner *= scale;
      res.n_radial_outer *= scale;
      auto sc = coaxial_scenario(spec, res);
      sc.data.tau0 = config.tau0;
      return sc;
    }
    case RunConfig::ScenarioType::ManufacturedSquare: {
      auto sc = manufactured_square_scenario(config.square_n * scale, config.square_permittivity);
      sc.data.tau0 = config.tau0;
      return sc;
    }
    case RunConfig::ScenarioType::TwoPlate: {
      TwoPlateSpec spec = config.two_plate;
      if (config.charges) spec.charges = *config.charges;
      spec.nx *= scale;
      spec.ny *= scale;
      auto sc = two_plate_fpc_scenario(spec);
      sc.data.tau0 = config.tau0;
      return sc;
    }
    case RunConfig::ScenarioType::MeshFile: {
      if (level != 0) throw ConfigError("mesh_file scenarios cannot be refined");
      const auto& m = config.mesh_file;
      Scenario sc;
      sc.name = "mesh_file";
      try {
        sc.mesh = std::make_shared<const Mesh2D>(load_mesh(m.path));
      } catch (const MeshError& e) {
        throw ConfigError("scenario.path: " + std::string(e.what()));
      }
      sc.data = ProblemData::uniform(*sc.mesh, m.permittivity);
      sc.data.tau0 = config.tau0;
      if (m.source != 0.0) {
        const double rho = m.source;
        sc.data.source = [rho](Point) { return rho; };
      }
      for (const auto& [marker, value] : m.dirichlet) {
        sc.data.dirichlet[marker] = [value](Point) { return value; };
      }
      for (const auto& [marker, value] : m.neumann) {
        sc.data.neumann[marker] = [value](Point) { return value; };
      }
      if (config.charges) sc.data.charges = *config.charges;
      try {
        sc.data.validate(*sc.mesh);
      } catch (const AssemblyError& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
      }
      return sc;
    }
  }
  throw ConfigError("unknown scenario");
}

}  // namespace hdg::app
