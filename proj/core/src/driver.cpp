#include "cavifem/driver.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cavifem {

void RunConfig::validate() const {
  problem.validate();
  solver.validate();
  if (degree != 1 && degree != 2)
    throw std::invalid_argument("RunConfig: degree must be 1 or 2");
  if (beta <= 0.0 || beta >= 1.0)
    throw std::invalid_argument("RunConfig: beta must lie in (0,1)");
  if (rounds < 0) throw std::invalid_argument("RunConfig: rounds must be >= 0");
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("RunConfig: nx and ny must be >= 1");
}

namespace {

std::string round_tag(int round) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", round);
  return buf;
}

}  // namespace

AdaptiveResult adaptive_solve_full(const RunConfig& config) {
  config.validate();
  const Coefficients coeffs = make_coefficients(config.problem);
  const bool output = !config.output_dir.empty();
  if (output) std::filesystem::create_directories(config.output_dir);
  auto out_path = [&](const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
  };

  Mesh mesh = build_rect_mesh(config.problem.domain(), config.nx, config.ny);

  RunReport report;
  Mesh final_mesh = mesh;
  DofMap final_dofmap;
  FieldVector final_p;
  ActiveState final_state;
  EstimatorReport final_estimator;

  for (int round = 0; round <= config.rounds; ++round) {
    const auto t0 = std::chrono::steady_clock::now();
    const DofMap dofmap = build_dofmap(mesh, config.degree);

    SolveResult solved;
    try {
      solved = fixed_point_solve(coeffs, config.solver, mesh, dofmap);
    } catch (NonconvergenceError&) {
      if (output && config.export_csv)
        write_history_csv(report, out_path("history.csv"));
      throw;
    }

    const EstimatorReport estimator =
        estimate(coeffs, config.solver, mesh, dofmap, solved.pressure);

    RoundStats stats;
    stats.round = round;
    stats.ndofs = dofmap.num_free();
    stats.eta_total = estimator.total;
    stats.p_max = solved.pressure.maxCoeff();
    stats.p_min = solved.pressure.minCoeff();
    stats.iterations = static_cast<int>(solved.log.size());
    stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report.rounds.push_back(stats);

    if (output) {
      const std::string tag = round_tag(round);
      if (config.export_csv) {
        write_report_csv(estimator, out_path("estimator_round_" + tag + ".csv"));
        write_iteration_log_csv(solved.log,
                                out_path("iterations_round_" + tag + ".csv"));
      }
      if (config.export_vtk)
        export_solution(coeffs, config.solver, mesh, dofmap, solved.pressure,
                        out_path("solution_round_" + tag + ".vtk"));
    }

    final_mesh = mesh;
    final_dofmap = dofmap;
    final_p = solved.pressure;
    final_state = solved.state;
    final_estimator = estimator;

    if (round < config.rounds) mesh = refine(mesh, mark(estimator, config.beta));
  }

  // Cavitated area fraction: active quadrature weight over |Omega|.
  {
    const QuadratureRule& rule = triangle_rule();
    double active_area = 0.0, area = 0.0;
    for (int k = 0; k < final_mesh.num_triangles(); ++k) {
      const ElementMap map = element_map(final_mesh, k);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double w = rule.weights[q] * map.det;
        area += w;
        if (final_state.at(k, static_cast<int>(q))) active_area += w;
      }
    }
    report.cavitated_fraction = active_area / area;
  }

  if (output && config.export_csv)
    write_history_csv(report, out_path("history.csv"));

  return {std::move(report),     std::move(final_mesh), std::move(final_dofmap),
          std::move(final_p),    std::move(final_state),
          std::move(final_estimator)};
}

RunReport adaptive_solve(const RunConfig& config) {
  return adaptive_solve_full(config).report;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("invalid boolean value '" + v + "'");
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "method") config.solver.method = parse_method(value);
  else if (key == "degree") config.degree = std::stoi(value);
  else if (key == "alpha") config.solver.alpha = std::stod(value);
  else if (key == "penalty_eps") config.solver.penalty_eps = std::stod(value);
  else if (key == "tol_rel") config.solver.tol_rel = std::stod(value);
  else if (key == "max_iter") config.solver.max_iter = std::stoi(value);
  else if (key == "beta") config.beta = std::stod(value);
  else if (key == "rounds") config.rounds = std::stoi(value);
  else if (key == "nx") config.nx = std::stoi(value);
  else if (key == "ny") config.ny = std::stoi(value);
  else if (key == "psi") config.problem.psi = std::stod(value);
  else if (key == "eccentricity") config.problem.eccentricity = std::stod(value);
  else if (key == "phase") config.problem.phase = std::stod(value);
  else if (key == "aspect_factor") config.problem.aspect_factor = std::stod(value);
  else if (key == "p_c") config.problem.p_c = std::stod(value);
  else if (key == "output_dir") config.output_dir = value;
  else if (key == "export_vtk") config.export_vtk = parse_bool(value);
  else if (key == "export_csv") config.export_csv = parse_bool(value);
  else throw std::invalid_argument("unknown configuration key '" + key + "'");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  RunConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    apply_config_entry(config, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  config.validate();
  return config;
}

void write_history_csv(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "# quadrature=" << report.quadrature << '\n';
  out << "round,ndofs,eta_total,p_max,p_min,iterations\n";
  out.precision(17);
  for (const RoundStats& r : report.rounds) {
    out << r.round << ',' << r.ndofs << ',' << r.eta_total << ',' << r.p_max
        << ',' << r.p_min << ',' << r.iterations << '\n';
  }
  out << "# cavitated_fraction=" << report.cavitated_fraction << '\n';
}

void export_solution(const Coefficients& coeffs, const SolverConfig& solver,
                     const Mesh& mesh, const DofMap& dofmap,
                     const FieldVector& field, const std::string& path) {
  std::vector<double> pressure(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) pressure[v] = field[v];

  const ElementData data = compute_element_data(coeffs, mesh);
  const QuadratureRule& rule = triangle_rule();
  std::vector<double> lambda_mean(mesh.num_triangles(), 0.0);
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      num += rule.weights[q] * recover_multiplier(coeffs, solver, ctx, data, k,
                                                  static_cast<int>(q), field,
                                                  dofmap.degree);
      den += rule.weights[q];
    }
    lambda_mean[k] = num / den;
  }
  write_vtk(mesh, path, pressure, "pressure", lambda_mean, "lambda");
}

}  // namespace cavifem
