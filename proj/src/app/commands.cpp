#include "hdg/app/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "hdg/output.hpp"
#include "hdg/solver.hpp"

namespace hdg::app {

using nlohmann::ordered_json;

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

double mesh_size(const Mesh2D& mesh) {
  double h = 0.0;
  for (int k = 0; k < static_cast<int>(mesh.num_elements()); ++k) h = std::max(h, mesh.longest_edge(k));
  return h;
}

ordered_json mesh_counts(const Mesh2D& mesh) {
  ordered_json j;
  j["elements"] = mesh.num_elements();
  j["vertices"] = mesh.num_vertices();
  j["faces"] = mesh.num_faces();
  j["skeleton_faces"] = mesh.interior_faces().size();
  j["conductors"] = mesh.conductor_count();
  j["h_max"] = mesh_size(mesh);
  return j;
}

ordered_json dimension_report(const Mesh2D& mesh, int order) {
  const ReferenceElement ref(order);
  const TraceDofMap dofs(mesh, ref);
  const long long dg = dg_unknown_count(mesh, order);
  ordered_json j;
  j["order"] = order;
  j["N_p"] = nodes_per_element(order);
  j["N_fp"] = nodes_per_face(order);
  j["N_dof"] = dofs.num_dofs();
  j["dg_unknowns"] = dg;
  j["ratio"] = static_cast<double>(dofs.num_dofs()) / static_cast<double>(dg);
  return j;
}

SolveResult solve_scenario(const Scenario& sc, int order, const SolverOptions& opts) {
  return solve_problem(sc.mesh, order, sc.data, opts);
}

}  // namespace

void run_solve(const RunConfig& config, const CommandOptions& opts, std::ostream& log) {
  const Scenario sc = make_scenario(config, 0);
  std::filesystem::create_directories(opts.output_dir);

  if (!opts.quiet) {
    log << "scenario " << sc.name << ": " << sc.mesh->num_elements() << " elements, order "
        << config.order << "\n";
  }
  SolveResult res = solve_scenario(sc, config.order, config.solver);
  const auto& disc = res.disc;
  const auto& sol = res.solution;
  const Mesh2D& mesh = *disc.mesh;

  ordered_json summary;
  summary["scenario"] = sc.name;
  summary["order"] = config.order;
  summary["tau0"] = config.tau0;
  summary["mesh"] = mesh_counts(mesh);

  ordered_json sys;
  sys["N_dof"] = res.system.num_dofs();
  sys["nnz"] = res.system.nonzeros();
  sys["N_p"] = nodes_per_element(config.order);
  sys["N_fp"] = nodes_per_face(config.order);
  sys["dg_unknowns"] = dg_unknown_count(mesh, config.order);
  sys["ratio"] = static_cast<double>(res.system.num_dofs()) /
                 static_cast<double>(dg_unknown_count(mesh, config.order));
  sys["symmetry_defect"] = symmetry_defect(res.system.matrix);
  summary["system"] = sys;

  ordered_json solver;
  solver["method"] = res.report.method;
  solver["used_fallback"] = res.report.used_fallback;
  solver["cg_iterations"] = res.report.cg_iterations;
  solver["relative_residual"] = res.report.relative_residual;
  summary["solver"] = solver;

  ordered_json conductors = ordered_json::array();
  for (int eta = 1; eta <= disc.dofs.num_conductors(); ++eta) {
    ordered_json c;
    c["id"] = eta;
    c["potential"] = sol.conductor_potentials[eta - 1];
    c["charge_prescribed"] = disc.data.charges[eta - 1];
    c["charge_computed"] = conductor_charge(disc, sol, eta);
    c["equipotential_deviation"] = equipotential_deviation(disc, sol, eta);
    if (static_cast<int>(sc.exact_conductor_potentials.size()) >= eta) {
      const double exact = sc.exact_conductor_potentials[eta - 1];
      c["potential_exact"] = exact;
      c["potential_abs_error"] = std::abs(sol.conductor_potentials[eta - 1] - exact);
    }
    conductors.push_back(c);
  }
  summary["conductors"] = conductors;

  const auto tr = transmission_residual(disc, sol);
  ordered_json trj;
  trj["max_weak"] = tr.max_weak;
  trj["max_strong"] = tr.max_strong;
  trj["charge"] = tr.charge;
  summary["transmission"] = trj;

  if (sc.exact_phi && sc.exact_e) {
    const auto err = l2_error(disc, sol, sc.exact_phi, sc.exact_e);
    summary["l2_error"] = {{"phi", err.phi}, {"E", err.e}};
  }

  if (config.condition_estimate) {
    const auto ce = condition_estimate(res.system);
    summary["condition"] = {{"lambda_max", ce.lambda_max},
                            {"lambda_min", ce.lambda_min},
                            {"kappa", ce.kappa},
                            {"converged", ce.converged}};
  }

  summary["timings_s"] = {{"local_assembly", res.timings.local_assembly},
                          {"global_assembly", res.timings.global_assembly},
                          {"solve", res.timings.solve},
                          {"recovery", res.timings.recovery}};

  {
    auto out = open_output(opts.output_dir / "summary.json");
    out << summary.dump(2) << "\n";
  }
  if (config.write_vtk) {
    auto out = open_output(opts.output_dir / "field.vtk");
    write_vtk(disc, sol, out);
  }
  for (const auto& line : config.lines) {
    const auto samples = evaluate_line(disc, sol, line.from, line.to, line.samples);
    auto out = open_output(opts.output_dir / (line.name + ".csv"));
    write_line_csv(samples, out);
  }
  if (opts.dump_matrix) {
    auto out = open_output(opts.output_dir / "matrix.txt");
    write_matrix_coordinate(res.system, out);
  }

  if (!opts.quiet) {
    log << "N_dof " << res.system.num_dofs() << ", solver " << res.report.method
        << ", residual " << res.report.relative_residual << "\n";
    for (int eta = 1; eta <= disc.dofs.num_conductors(); ++eta) {
      log << "conductor " << eta << ": phi = " << std::setprecision(10)
          << sol.conductor_potentials[eta - 1] << "\n";
    }
    log << "wrote " << (opts.output_dir / "summary.json").string() << "\n";
  }
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& config, const CommandOptions& opts,
                                            std::ostream& log) {
  if (config.convergence_levels < 3) {
    throw ConfigError("convergence.levels: at least 3 levels are needed");
  }
  if (config.scenario == RunConfig::ScenarioType::MeshFile) {
    throw ConfigError("scenario.type: mesh_file has no exact solution for a convergence study");
  }
  if (config.scenario == RunConfig::ScenarioType::TwoPlate && !config.two_plate.plates.empty()) {
    throw ConfigError("scenario.plates: two_plate with plates has no exact solution");
  }
  std::filesystem::create_directories(opts.output_dir);

  std::vector<ConvergenceRow> rows;
  for (int level = 0; level < config.convergence_levels; ++level) {
    const Scenario sc = make_scenario(config, level);
    SolveResult res = solve_scenario(sc, config.order, config.solver);
    const auto err = l2_error(res.disc, res.solution, sc.exact_phi, sc.exact_e);
    ConvergenceRow row;
    row.h = mesh_size(*sc.mesh);
    row.dofs = res.system.num_dofs();
    row.err_phi = err.phi;
    row.err_e = err.e;
    for (std::size_t i = 0; i < sc.exact_conductor_potentials.size(); ++i) {
      row.fpc_abs_err =
          std::max(row.fpc_abs_err,
                   std::abs(res.solution.conductor_potentials[i] - sc.exact_conductor_potentials[i]));
    }
    rows.push_back(row);
    if (!opts.quiet) {
      log << "level " << level << ": h = " << row.h << ", N_dof = " << row.dofs
          << ", |phi - phi_h| = " << row.err_phi << "\n";
    }
  }

  auto out = open_output(opts.output_dir / "convergence.csv");
  out << "h,dof,err_phi_L2,err_E_L2,fpc_abs_err,observed_rate\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << r.h << "," << r.dofs << "," << r.err_phi << "," << r.err_e << "," << r.fpc_abs_err
        << ",";
    if (i > 0) out << std::log(rows[i - 1].err_phi / r.err_phi) / std::log(rows[i - 1].h / r.h);
    out << "\n";
  }
  return rows;
}

std::string run_info(const std::filesystem::path& path, const CommandOptions& opts) {
  std::ifstream probe(path);
  if (!probe) throw ConfigError("cannot open " + path.string());
  std::string first;
  probe >> first;
  probe.close();

  std::shared_ptr<const Mesh2D> mesh;
  int order = opts.order > 0 ? opts.order : 1;
  ordered_json j;
  if (first == "hdgmesh") {
    mesh = std::make_shared<const Mesh2D>(load_mesh(path));
    j["source"] = "mesh";
  } else {
    const RunConfig cfg = load_config(path);
    if (opts.order <= 0) order = cfg.order;
    mesh = make_scenario(cfg, 0).mesh;
    j["source"] = "config";
    j["scenario"] = scenario_name(cfg.scenario);
  }
  if (order < kMinOrder || order > kMaxOrder) {
    throw ConfigError("order: must be in [" + std::to_string(kMinOrder) + ", " +
                      std::to_string(kMaxOrder) + "]");
  }
  j["mesh"] = mesh_counts(*mesh);
  j["selected"] = dimension_report(*mesh, order);
  ordered_json table = ordered_json::array();
  for (int p = kMinOrder; p <= kMaxOrder; ++p) table.push_back(dimension_report(*mesh, p));
  j["by_order"] = table;
  return j.dump(2);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"HDG electrostatics with floating conductors"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string output_dir = ".";
  std::string config_path;
  std::string info_path;

  auto* solve = app.add_subcommand("solve", "solve one configuration");
  solve->add_option("config", config_path, "JSON configuration")->required();
  solve->add_option("-o,--output-dir", output_dir, "output directory");
  solve->add_flag("-q,--quiet", opts.quiet, "no progress output");
  solve->add_flag("--dump-matrix", opts.dump_matrix, "write the trace matrix to matrix.txt");

  auto* conv = app.add_subcommand("convergence", "run a refinement study");
  conv->add_option("config", config_path, "JSON configuration")->required();
  conv->add_option("-o,--output-dir", output_dir, "output directory");
  conv->add_flag("-q,--quiet", opts.quiet, "no progress output");

  auto* info = app.add_subcommand("info", "report unknown counts for a mesh or configuration");
  info->add_option("file", info_path, "mesh file or JSON configuration")->required();
  info->add_option("--order", opts.order, "polynomial order")->check(CLI::Range(kMinOrder, kMaxOrder));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }
  opts.output_dir = output_dir;

  try {
    if (solve->parsed()) {
      run_solve(load_config(config_path), opts, out);
    } else if (conv->parsed()) {
      run_convergence(load_config(config_path), opts, out);
    } else if (info->parsed()) {
      out << run_info(info_path, opts) << "\n";
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const MeshError& e) {
    err << "mesh error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const AssemblyError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kSuccess;
}

}  // namespace hdg::app
