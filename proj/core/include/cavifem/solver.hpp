#pragma once

#include <stdexcept>
#include <string>

#include "cavifem/assembly.hpp"

namespace cavifem {

enum class Method { nitsche, penalty };

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct SolverConfig {
  Method method = Method::nitsche;
  double alpha = 1e-2;        // Nitsche stabilization
  double penalty_eps = 10.0;  // penalty parameter
  double tol_rel = 1e-10;     // relative energy tolerance of the iteration
  int max_iter = 100;

  void validate() const;
};

// One flag per (element, quadrature point): does the point belong to the
// discrete cavitated region.
struct ActiveState {
  int n_qp = 0;  // points per element
  std::vector<char> active;

  bool at(int k, int q) const { return active[k * n_qp + q] != 0; }
  int count() const;
  bool operator==(const ActiveState& other) const {
    return n_qp == other.n_qp && active == other.active;
  }
};

struct IterationRecord {
  double increment_norm = 0.0;
  int active_points = 0;
  double linear_residual = 0.0;
};

using IterationLog = std::vector<IterationRecord>;

class NonconvergenceError : public std::runtime_error {
public:
  NonconvergenceError(const std::string& msg, IterationLog log)
      : std::runtime_error(msg), log(std::move(log)) {}
  IterationLog log;
};

struct SolveResult {
  FieldVector pressure;
  ActiveState state;
  IterationLog log;
};

// Plain Reynolds solve (no constraint); the fixed-point initial guess.
FieldVector solve_unconstrained(const Coefficients& coeffs, const Mesh& mesh,
                                const DofMap& dofmap);

// Cavitation indicator at one quadrature point of element k.  Nitsche:
// d_K^3/(alpha h_K^2) (p_c - p_h) - f - E p_h; penalty: p_c - p_h.  A point
// is active iff the value is positive.
double active_indicator_value(const Coefficients& coeffs,
                              const SolverConfig& config,
                              const ElementContext& ctx,
                              const ElementData& data, int k, int q,
                              const FieldVector& field);

ActiveState compute_active_state(const Coefficients& coeffs,
                                 const SolverConfig& config, const Mesh& mesh,
                                 const DofMap& dofmap,
                                 const ElementData& data,
                                 const FieldVector& field);

LinearSystem assemble_nitsche_system(const Coefficients& coeffs,
                                     const SolverConfig& config,
                                     const Mesh& mesh, const DofMap& dofmap,
                                     const ElementData& data,
                                     const ActiveState& state);

LinearSystem assemble_penalty_system(const Coefficients& coeffs,
                                     const SolverConfig& config,
                                     const Mesh& mesh, const DofMap& dofmap,
                                     const ElementData& data,
                                     const ActiveState& state);

// Nonnegative multiplier recovered pointwise from the converged field.
double recover_multiplier(const Coefficients& coeffs,
                          const SolverConfig& config,
                          const ElementContext& ctx, const ElementData& data,
                          int k, int q, const FieldVector& field,
                          int degree);

// Sparse Cholesky on the Dirichlet-reduced system; masked entries of the
// returned vector are zero.  Throws if the reduced matrix is not SPD.
FieldVector linear_solve(const LinearSystem& system,
                         const std::vector<char>& dirichlet_mask,
                         double* residual_out = nullptr);

SolveResult fixed_point_solve(const Coefficients& coeffs,
                              const SolverConfig& config, const Mesh& mesh,
                              const DofMap& dofmap);

void write_iteration_log_csv(const IterationLog& log, const std::string& path);

}  // namespace cavifem
