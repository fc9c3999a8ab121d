#pragma once

#include "cavifem/estimator.hpp"
#include "cavifem/vtk.hpp"

namespace cavifem {

struct RunConfig {
  ProblemSpec problem;
  SolverConfig solver;
  int degree = 1;
  double beta = 0.5;
  int rounds = 7;  // refinement rounds; rounds+1 solves in total
  int nx = 12;     // initial mesh subdivisions along theta
  int ny = 8;      // and along y
  std::string output_dir;  // empty: no file output
  bool export_vtk = false;
  bool export_csv = true;

  void validate() const;
};

struct RoundStats {
  int round = 0;
  int ndofs = 0;
  double eta_total = 0.0;
  double p_max = 0.0;
  double p_min = 0.0;
  int iterations = 0;
  double wall_time = 0.0;  // seconds, not exported
};

struct RunReport {
  std::vector<RoundStats> rounds;
  double cavitated_fraction = 0.0;
  std::string quadrature = "triangle-6pt-deg4/edge-gauss3";
};

// Solve / estimate / mark / refine loop.  Writes per-round artifacts into
// output_dir when configured.
RunReport adaptive_solve(const RunConfig& config);

// Like adaptive_solve but hands back the final discretization and solution.
struct AdaptiveResult {
  RunReport report;
  Mesh mesh;
  DofMap dofmap;
  FieldVector pressure;
  ActiveState state;
  EstimatorReport estimator;
};

AdaptiveResult adaptive_solve_full(const RunConfig& config);

// Flat key=value configuration file; '#' starts a comment.
RunConfig load_config(const std::string& path);
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

void write_history_csv(const RunReport& report, const std::string& path);

// VTK file with vertex pressures and a per-cell mean multiplier.
void export_solution(const Coefficients& coeffs, const SolverConfig& solver,
                     const Mesh& mesh, const DofMap& dofmap,
                     const FieldVector& field, const std::string& path);

}  // namespace cavifem
