#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cavifem/driver.hpp"

using namespace cavifem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig small_config() {
  RunConfig config;
  config.nx = 6;
  config.ny = 4;
  config.rounds = 2;
  return config;
}

}  // namespace

TEST_CASE("configuration entries parse with validation") {
  RunConfig config;
  apply_config_entry(config, "method", "penalty");
  apply_config_entry(config, "degree", "2");
  apply_config_entry(config, "beta", "0.4");
  apply_config_entry(config, "eccentricity", "0.8");
  apply_config_entry(config, "export_vtk", "true");
  CHECK(config.solver.method == Method::penalty);
  CHECK(config.degree == 2);
  CHECK(config.beta == doctest::Approx(0.4));
  CHECK(config.problem.eccentricity == doctest::Approx(0.8));
  CHECK(config.export_vtk);
  CHECK_THROWS_AS(apply_config_entry(config, "viscosity", "1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_config_entry(config, "export_vtk", "maybe"),
                  std::invalid_argument);
}

TEST_CASE("config files support comments and blank lines") {
  TempDir dir("cavifem_cfg_test");
  const fs::path cfg = dir.path / "run.cfg";
  std::ofstream(cfg) << "# comment line\n"
                        "method = penalty\n"
                        "\n"
                        "rounds = 3   # trailing comment\n"
                        "alpha = 5e-3\n";
  const RunConfig config = load_config(cfg.string());
  CHECK(config.solver.method == Method::penalty);
  CHECK(config.rounds == 3);
  CHECK(config.solver.alpha == doctest::Approx(5e-3));
  CHECK_THROWS_AS(load_config((dir.path / "missing.cfg").string()),
                  std::runtime_error);
}

TEST_CASE("invalid run configurations are rejected") {
  RunConfig config;
  config.beta = 1.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = RunConfig{};
  config.rounds = -1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = RunConfig{};
  config.degree = 3;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("zero rounds means a single solve") {
  RunConfig config = small_config();
  config.rounds = 0;
  const RunReport report = adaptive_solve(config);
  REQUIRE(report.rounds.size() == 1);
  CHECK(report.rounds[0].ndofs == 5 * 3);
  CHECK(report.rounds[0].eta_total > 0.0);
  CHECK(report.cavitated_fraction > 0.0);
  CHECK(report.cavitated_fraction < 1.0);
}

TEST_CASE("adaptive rounds strictly grow the space") {
  RunConfig config = small_config();
  config.rounds = 3;
  const RunReport report = adaptive_solve(config);
  REQUIRE(report.rounds.size() == 4);
  for (std::size_t r = 1; r < report.rounds.size(); ++r) {
    CHECK(report.rounds[r].ndofs > report.rounds[r - 1].ndofs);
    CHECK(report.rounds[r].round == static_cast<int>(r));
    CHECK(report.rounds[r].iterations >= 1);
  }
}

TEST_CASE("history csv round trips the report") {
  RunConfig config = small_config();
  const AdaptiveResult result = adaptive_solve_full(config);
  TempDir dir("cavifem_hist_test");
  const fs::path csv = dir.path / "history.csv";
  write_history_csv(result.report, csv.string());

  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);  // quadrature comment
  CHECK(line.rfind("# quadrature=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "round,ndofs,eta_total,p_max,p_min,iterations");
  std::size_t row = 0;
  while (std::getline(in, line) && !line.empty() && line[0] != '#') {
    std::istringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    CHECK(std::stoi(field) == result.report.rounds[row].round);
    std::getline(ss, field, ',');
    CHECK(std::stoi(field) == result.report.rounds[row].ndofs);
    std::getline(ss, field, ',');
    CHECK(std::stod(field) ==
          doctest::Approx(result.report.rounds[row].eta_total).epsilon(1e-15));
    std::getline(ss, field, ',');
    CHECK(std::stod(field) ==
          doctest::Approx(result.report.rounds[row].p_max).epsilon(1e-15));
    ++row;
  }
  CHECK(row == result.report.rounds.size());
}

TEST_CASE("identical configurations produce bitwise-identical histories") {
  RunConfig config = small_config();
  TempDir a("cavifem_det_a"), b("cavifem_det_b");
  config.output_dir = a.path.string();
  adaptive_solve(config);
  config.output_dir = b.path.string();
  adaptive_solve(config);
  CHECK(slurp(a.path / "history.csv") == slurp(b.path / "history.csv"));
  CHECK(slurp(a.path / "estimator_round_02.csv") ==
        slurp(b.path / "estimator_round_02.csv"));
}

TEST_CASE("vtk export writes vertex pressures and cell multipliers") {
  const RunConfig config = small_config();
  const Coefficients coeffs = make_coefficients(config.problem);
  const Mesh mesh = build_rect_mesh(config.problem.domain(), 4, 3);
  const DofMap dofmap = build_dofmap(mesh, 1);
  const FieldVector zero = FieldVector::Zero(dofmap.n_dofs);
  TempDir dir("cavifem_vtk_test");
  const fs::path vtk = dir.path / "solution.vtk";
  export_solution(coeffs, config.solver, mesh, dofmap, zero, vtk.string());

  const std::string text = slurp(vtk);
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("POINT_DATA 20") != std::string::npos);
  CHECK(text.find("SCALARS pressure") != std::string::npos);
  CHECK(text.find("SCALARS lambda") != std::string::npos);
  CHECK(text.find("CELL_TYPES 24") != std::string::npos);
}

TEST_CASE("refinement concentrates at the cavitation boundary") {
  RunConfig config;
  config.rounds = 4;
  const AdaptiveResult result = adaptive_solve_full(config);

  // Elements whose quadrature points are partly active straddle the free
  // boundary; fully active elements lie deep in the cavitated region.
  double band_area = 0.0, deep_area = 0.0;
  int band_count = 0, deep_count = 0;
  const int nq = result.state.n_qp;
  for (int k = 0; k < result.mesh.num_triangles(); ++k) {
    int active = 0;
    for (int q = 0; q < nq; ++q)
      if (result.state.at(k, q)) ++active;
    if (active == nq) {
      deep_area += result.mesh.triangle_area(k);
      ++deep_count;
    } else if (active > 0) {
      band_area += result.mesh.triangle_area(k);
      ++band_count;
    }
  }
  REQUIRE(band_count > 0);
  REQUIRE(deep_count > 0);
  CHECK(band_area / band_count < deep_area / deep_count);
}
