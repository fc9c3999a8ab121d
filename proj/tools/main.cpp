#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>

#include "cavifem/driver.hpp"
#include "cavifem/manufactured.hpp"

namespace {

using namespace cavifem;

constexpr int kExitUsage = 2;
constexpr int kExitNonconvergence = 3;

struct Overrides {
  std::string method;
  int degree = 0;
  double beta = 0.0;
  double alpha = 0.0;
  double penalty_eps = 0.0;
  int rounds = -1;
  std::string output_dir;

  void apply(RunConfig& config) const {
    if (!method.empty()) config.solver.method = parse_method(method);
    if (degree > 0) config.degree = degree;
    if (beta > 0.0) config.beta = beta;
    if (alpha > 0.0) config.solver.alpha = alpha;
    if (penalty_eps > 0.0) config.solver.penalty_eps = penalty_eps;
    if (rounds >= 0) config.rounds = rounds;
    if (!output_dir.empty()) config.output_dir = output_dir;
  }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--method", ov.method, "nitsche or penalty");
  cmd->add_option("--degree", ov.degree, "polynomial degree (1 or 2)");
  cmd->add_option("--beta", ov.beta, "marking parameter in (0,1)");
  cmd->add_option("--alpha", ov.alpha, "Nitsche stabilization parameter");
  cmd->add_option("--penalty-eps", ov.penalty_eps, "penalty parameter");
  cmd->add_option("--rounds", ov.rounds, "number of refinement rounds");
  cmd->add_option("--output-dir", ov.output_dir, "directory for exports");
}

void print_report(const RunConfig& config, const RunReport& report) {
  std::printf("# method=%s degree=%d alpha=%g penalty_eps=%g beta=%g\n",
              method_name(config.solver.method).c_str(), config.degree,
              config.solver.alpha, config.solver.penalty_eps, config.beta);
  std::printf("%5s %8s %14s %12s %12s %6s\n", "round", "ndofs", "eta_total",
              "p_max", "p_min", "iters");
  for (const RoundStats& r : report.rounds) {
    std::printf("%5d %8d %14.8g %12.6g %12.6g %6d\n", r.round, r.ndofs,
                r.eta_total, r.p_max, r.p_min, r.iterations);
  }
  std::printf("# cavitated area fraction: %.4f\n", report.cavitated_fraction);
}

int run_solve(const std::string& config_path, const Overrides& ov) {
  RunConfig config = load_config(config_path);
  ov.apply(config);
  config.validate();
  const RunReport report = adaptive_solve(config);
  print_report(config, report);
  return 0;
}

int run_sweep(const std::string& config_path, const Overrides& ov,
              const std::vector<double>& alphas,
              const std::vector<double>& eps_values) {
  RunConfig base = load_config(config_path);
  ov.apply(base);

  struct Case {
    std::string label;
    RunConfig config;
  };
  std::vector<Case> cases;
  for (double a : alphas) {
    Case c{"alpha=" + std::to_string(a), base};
    c.config.solver.alpha = a;
    cases.push_back(std::move(c));
  }
  for (double e : eps_values) {
    Case c{"penalty_eps=" + std::to_string(e), base};
    c.config.solver.penalty_eps = e;
    cases.push_back(std::move(c));
  }
  if (cases.empty())
    throw CLI::ValidationError("sweep", "need --alphas or --penalty-eps-list");

  std::printf("%24s %8s %14s %12s %6s\n", "case", "ndofs", "eta_total", "p_max",
              "iters");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    RunConfig config = cases[i].config;
    config.validate();
    if (!config.output_dir.empty()) {
      config.output_dir = (std::filesystem::path(config.output_dir) /
                           ("case_" + std::to_string(i)))
                              .string();
    }
    const RunReport report = adaptive_solve(config);
    const RoundStats& last = report.rounds.back();
    std::printf("%24s %8d %14.8g %12.6g %6d\n", cases[i].label.c_str(),
                last.ndofs, last.eta_total, last.p_max, last.iterations);
  }
  return 0;
}

bool check(const char* name, bool ok) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
  return ok;
}

int run_verify() {
  bool all = true;
  const ProblemSpec spec;
  const Coefficients coeffs = make_coefficients(spec);

  // Quadrature exactness up to degree 4 on the reference triangle.
  {
    bool ok = true;
    const QuadratureRule& rule = triangle_rule();
    for (int a = 0; a + 0 <= 4; ++a) {
      for (int b = 0; a + b <= 4; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q)
          s += rule.weights[q] * std::pow(rule.points[q][1], a) *
               std::pow(rule.points[q][2], b);
        double exact = 1.0;  // a! b! / (a+b+2)!
        for (int i = 1; i <= a; ++i) exact *= i;
        for (int i = 1; i <= b; ++i) exact *= i;
        for (int i = 1; i <= a + b + 2; ++i) exact /= i;
        ok = ok && std::abs(s - exact) < 1e-14;
      }
    }
    all = check("triangle quadrature exact to degree 4", ok) && all;
  }

  // Conformity and angle floor across refinements.
  {
    Mesh mesh = build_rect_mesh(spec.domain(), 12, 8);
    const double floor_deg = 20.0;
    bool ok = true;
    for (int round = 0; round < 6; ++round) {
      MarkSet marks;
      for (int k = 0; k < mesh.num_triangles(); k += 3) marks.marked.insert(k);
      mesh = refine(mesh, marks);
      ok = ok && mesh.min_angle_deg() >= floor_deg;
    }
    all = check("refinement keeps conformity and the 20 degree floor", ok) && all;
  }

  // Stiffness symmetry and positive definiteness on the benchmark mesh.
  {
    const Mesh mesh = build_rect_mesh(spec.domain(), 12, 8);
    const DofMap dofmap = build_dofmap(mesh, 2);
    const SparseMatrix A = assemble_stiffness(coeffs, mesh, dofmap);
    const SparseMatrix At = SparseMatrix(A.transpose());
    const SparseMatrix diff = A - At;
    const double asym =
        diff.nonZeros() == 0
            ? 0.0
            : Eigen::Map<const FieldVector>(diff.valuePtr(), diff.nonZeros())
                  .cwiseAbs()
                  .maxCoeff();
    bool ok = asym == 0.0;
    LinearSystem system{A, FieldVector::Zero(dofmap.n_dofs)};
    try {
      linear_solve(system, dofmap.dirichlet_mask);
    } catch (const std::exception&) {
      ok = false;
    }
    all = check("stiffness matrix symmetric and positive definite", ok) && all;
  }

  // Manufactured-solution convergence rates.
  for (int degree : {1, 2}) {
    const ManufacturedCase mc = manufactured_case(spec);
    Mesh mesh = build_rect_mesh(spec.domain(), 6, 4);
    std::vector<double> errors;
    for (int level = 0; level < 4; ++level) {
      const DofMap dofmap = build_dofmap(mesh, degree);
      LinearSystem system{assemble_stiffness(mc.coeffs, mesh, dofmap),
                          assemble_load(mc.coeffs, mesh, dofmap, mc.source)};
      const FieldVector p = linear_solve(system, dofmap.dirichlet_mask);
      errors.push_back(
          energy_norm_error(mc.coeffs, mesh, dofmap, p, mc.exact_grad));
      MarkSet all_marks;
      for (int k = 0; k < mesh.num_triangles(); ++k) all_marks.marked.insert(k);
      mesh = refine(mesh, all_marks);
    }
    double slope = 0.0;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
      slope += std::log2(errors[i] / errors[i + 1]);
    slope /= static_cast<double>(errors.size() - 1);
    const std::string name = "energy error rate " + std::to_string(degree) +
                             " for P" + std::to_string(degree) + " elements";
    all = check(name.c_str(), std::abs(slope - degree) <= 0.15) && all;
  }

  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive finite element solver for cavitation in "
               "hydrodynamic lubrication"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::vector<double> alphas, eps_values;

  CLI::App* solve = app.add_subcommand("solve", "run an adaptive solve");
  solve->add_option("config", config_path, "configuration file")->required();
  add_override_flags(solve, ov);

  CLI::App* sweep =
      app.add_subcommand("sweep", "run a parameter sweep over alpha or eps");
  sweep->add_option("config", config_path, "configuration file")->required();
  sweep->add_option("--alphas", alphas, "stabilization parameters to try");
  sweep->add_option("--penalty-eps-list", eps_values,
                    "penalty parameters to try");
  add_override_flags(sweep, ov);

  CLI::App* verify =
      app.add_subcommand("verify", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(config_path, ov);
    if (sweep->parsed()) return run_sweep(config_path, ov, alphas, eps_values);
    if (verify->parsed()) return run_verify();
  } catch (const NonconvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNonconvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
