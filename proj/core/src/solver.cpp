#include "cavifem/solver.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <fstream>
#include <sstream>

namespace cavifem {

Method parse_method(const std::string& name) {
  if (name == "nitsche") return Method::nitsche;
  if (name == "penalty") return Method::penalty;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string method_name(Method m) {
  return m == Method::nitsche ? "nitsche" : "penalty";
}

void SolverConfig::validate() const {
  if (alpha <= 0.0) throw std::invalid_argument("SolverConfig: alpha must be positive");
  if (penalty_eps <= 0.0)
    throw std::invalid_argument("SolverConfig: penalty_eps must be positive");
  if (tol_rel <= 0.0) throw std::invalid_argument("SolverConfig: tol_rel must be positive");
  if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
}

int ActiveState::count() const {
  int n = 0;
  for (char a : active)
    if (a) ++n;
  return n;
}

FieldVector solve_unconstrained(const Coefficients& coeffs, const Mesh& mesh,
                                const DofMap& dofmap) {
  LinearSystem system{assemble_stiffness(coeffs, mesh, dofmap),
                      assemble_load(coeffs, mesh, dofmap)};
  return linear_solve(system, dofmap.dirichlet_mask);
}

double active_indicator_value(const Coefficients& coeffs,
                              const SolverConfig& config,
                              const ElementContext& ctx,
                              const ElementData& data, int k, int q,
                              const FieldVector& field) {
  const double p = ctx.field_value(q, field);
  if (config.method == Method::penalty) return coeffs.p_c - p;
  const double dK = data.d_mean[k];
  const double hK = data.h[k];
  const double kappa = dK * dK * dK / (config.alpha * hK * hK);
  return kappa * (coeffs.p_c - p) - ctx.f(q) - ctx.field_operator(q, field);
}

ActiveState compute_active_state(const Coefficients& coeffs,
                                 const SolverConfig& config, const Mesh& mesh,
                                 const DofMap& dofmap,
                                 const ElementData& data,
                                 const FieldVector& field) {
  ActiveState state;
  state.n_qp = static_cast<int>(triangle_rule().points.size());
  state.active.assign(mesh.num_triangles() * state.n_qp, 0);
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    for (int q = 0; q < state.n_qp; ++q) {
      if (active_indicator_value(coeffs, config, ctx, data, k, q, field) > 0.0)
        state.active[k * state.n_qp + q] = 1;
    }
  }
  return state;
}

LinearSystem assemble_nitsche_system(const Coefficients& coeffs,
                                     const SolverConfig& config,
                                     const Mesh& mesh, const DofMap& dofmap,
                                     const ElementData& data,
                                     const ActiveState& state) {
  config.validate();
  std::vector<Eigen::Triplet<double>> triplets;
  FieldVector b = assemble_load(coeffs, mesh, dofmap);

  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    const double hK = data.h[k];
    const double dK = data.d_mean[k];
    const double kappa = dK * dK * dK / (config.alpha * hK * hK);
    for (int q = 0; q < ctx.nq(); ++q) {
      const double w = ctx.weight(q);
      const double d3 = ctx.d3(q);
      const bool active = state.at(k, q);
      for (int i = 0; i < ctx.nb(); ++i) {
        const auto& gi = ctx.basis_grad(q, i);
        const double vi = ctx.basis_value(q, i);
        const double ei = ctx.basis_operator(q, i);
        for (int j = 0; j < ctx.nb(); ++j) {
          const auto& gj = ctx.basis_grad(q, j);
          double v = w * d3 * (gi[0] * gj[0] + coeffs.c * gi[1] * gj[1]);
          if (active) {
            const double vj = ctx.basis_value(q, j);
            const double ej = ctx.basis_operator(q, j);
            v += w * (vi * ej + ei * vj + kappa * vi * vj);
          } else {
            v -= w * config.alpha * hK * hK * ei * ctx.basis_operator(q, j);
          }
          triplets.emplace_back(ctx.dofs()[i], ctx.dofs()[j], v);
        }
        if (active) {
          // The base load is replaced on the cavitated region.
          b[ctx.dofs()[i]] +=
              w * (coeffs.p_c * ei + kappa * coeffs.p_c * vi - ctx.f(q) * vi);
        } else {
          b[ctx.dofs()[i]] += w * config.alpha * hK * hK * ctx.f(q) * ei;
        }
      }
    }
  }

  LinearSystem system;
  system.matrix.resize(dofmap.n_dofs, dofmap.n_dofs);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  system.rhs = std::move(b);
  return system;
}

LinearSystem assemble_penalty_system(const Coefficients& coeffs,
                                     const SolverConfig& config,
                                     const Mesh& mesh, const DofMap& dofmap,
                                     const ElementData& data,
                                     const ActiveState& state) {
  config.validate();
  std::vector<Eigen::Triplet<double>> triplets;
  FieldVector b = assemble_load(coeffs, mesh, dofmap);

  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    const double gamma =
        1.0 / (config.penalty_eps * std::pow(data.h[k], dofmap.degree + 1));
    for (int q = 0; q < ctx.nq(); ++q) {
      const double w = ctx.weight(q);
      const double d3 = ctx.d3(q);
      const bool active = state.at(k, q);
      for (int i = 0; i < ctx.nb(); ++i) {
        const auto& gi = ctx.basis_grad(q, i);
        for (int j = 0; j < ctx.nb(); ++j) {
          const auto& gj = ctx.basis_grad(q, j);
          double v = w * d3 * (gi[0] * gj[0] + coeffs.c * gi[1] * gj[1]);
          if (active)
            v += w * gamma * ctx.basis_value(q, i) * ctx.basis_value(q, j);
          triplets.emplace_back(ctx.dofs()[i], ctx.dofs()[j], v);
        }
        if (active && coeffs.p_c != 0.0)
          b[ctx.dofs()[i]] += w * gamma * coeffs.p_c * ctx.basis_value(q, i);
      }
    }
  }

  LinearSystem system;
  system.matrix.resize(dofmap.n_dofs, dofmap.n_dofs);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  system.rhs = std::move(b);
  return system;
}

double recover_multiplier(const Coefficients& coeffs,
                          const SolverConfig& config,
                          const ElementContext& ctx, const ElementData& data,
                          int k, int q, const FieldVector& field,
                          int degree) {
  if (config.method == Method::penalty) {
    const double gamma =
        1.0 / (config.penalty_eps * std::pow(data.h[k], degree + 1));
    return gamma * std::max(coeffs.p_c - ctx.field_value(q, field), 0.0);
  }
  return std::max(
      active_indicator_value(coeffs, config, ctx, data, k, q, field), 0.0);
}

FieldVector linear_solve(const LinearSystem& system,
                         const std::vector<char>& dirichlet_mask,
                         double* residual_out) {
  const int n = static_cast<int>(system.rhs.size());
  std::vector<int> free_index(n, -1);
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (!dirichlet_mask[i]) free_index[i] = nf++;

  std::vector<Eigen::Triplet<double>> triplets;
  for (int col = 0; col < system.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(system.matrix, col); it; ++it) {
      const int ri = free_index[it.row()], ci = free_index[it.col()];
      if (ri >= 0 && ci >= 0) triplets.emplace_back(ri, ci, it.value());
    }
  }
  SparseMatrix A(nf, nf);
  A.setFromTriplets(triplets.begin(), triplets.end());
  FieldVector b(nf);
  for (int i = 0; i < n; ++i)
    if (free_index[i] >= 0) b[free_index[i]] = system.rhs[i];

  Eigen::SimplicialLLT<SparseMatrix> llt(A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "linear_solve: system is not positive definite; for Nitsche's method "
        "this usually means alpha exceeds the inverse-inequality bound C_I");

  FieldVector xf = llt.solve(b);
  // Normwise backward error; iterative refinement drives it to roundoff even
  // for strongly penalized systems.
  const double anorm =
      A.nonZeros() == 0
          ? 0.0
          : Eigen::Map<const FieldVector>(A.valuePtr(), A.nonZeros())
                .cwiseAbs()
                .maxCoeff();
  auto backward_error = [&](const FieldVector& x) {
    const double denom = anorm * x.norm() + b.norm();
    return denom > 0.0 ? (A * x - b).norm() / denom : 0.0;
  };
  double res = backward_error(xf);
  for (int step = 0; step < 8 && res > 1e-14; ++step) {
    xf += llt.solve(b - A * xf);
    const double next = backward_error(xf);
    if (next >= res) break;
    res = next;
  }
  if (residual_out) *residual_out = res;
  if (res > 1e-12) {
    std::ostringstream msg;
    msg << "linear_solve: residual " << res << " exceeds tolerance";
    throw std::runtime_error(msg.str());
  }

  FieldVector x = FieldVector::Zero(n);
  for (int i = 0; i < n; ++i)
    if (free_index[i] >= 0) x[i] = xf[free_index[i]];
  return x;
}

SolveResult fixed_point_solve(const Coefficients& coeffs,
                              const SolverConfig& config, const Mesh& mesh,
                              const DofMap& dofmap) {
  config.validate();
  const ElementData data = compute_element_data(coeffs, mesh);

  FieldVector p = solve_unconstrained(coeffs, mesh, dofmap);
  ActiveState state = compute_active_state(coeffs, config, mesh, dofmap, data, p);

  IterationLog log;
  ActiveState state_prev2;  // state used two iterations ago
  int oscillations = 0;

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    const LinearSystem system =
        config.method == Method::nitsche
            ? assemble_nitsche_system(coeffs, config, mesh, dofmap, data, state)
            : assemble_penalty_system(coeffs, config, mesh, dofmap, data, state);

    double linres = 0.0;
    FieldVector p_new = linear_solve(system, dofmap.dirichlet_mask, &linres);

    const FieldVector diff = p_new - p;
    const double inc = energy_norm(coeffs, mesh, dofmap, diff);
    const double pnorm = energy_norm(coeffs, mesh, dofmap, p_new);

    ActiveState state_new =
        compute_active_state(coeffs, config, mesh, dofmap, data, p_new);
    log.push_back({inc, state_new.count(), linres});

    if (state_new == state || inc <= config.tol_rel * pnorm)
      return {std::move(p_new), std::move(state_new), std::move(log)};

    // Anti-cycling: on a sustained period-2 oscillation, freeze the union
    // of the two competing sets for one step.
    if (!state_prev2.active.empty() && state_new == state_prev2) {
      if (++oscillations >= 3) {
        for (std::size_t i = 0; i < state_new.active.size(); ++i)
          state_new.active[i] = state_new.active[i] | state.active[i];
        oscillations = 0;
      }
    } else {
      oscillations = 0;
    }

    p = std::move(p_new);
    state_prev2 = std::move(state);
    state = std::move(state_new);
  }
  throw NonconvergenceError("fixed_point_solve: no convergence within " +
                                std::to_string(config.max_iter) + " iterations",
                            log);
}

void write_iteration_log_csv(const IterationLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "iter,increment_norm,active_points,linres\n";
  out.precision(17);
  for (std::size_t i = 0; i < log.size(); ++i) {
    out << (i + 1) << ',' << log[i].increment_norm << ',' << log[i].active_points
        << ',' << log[i].linear_residual << '\n';
  }
}

}  // namespace cavifem
