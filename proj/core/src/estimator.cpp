#include "cavifem/estimator.hpp"

#include <cmath>
#include <fstream>

namespace cavifem {

double EstimatorReport::max_eta() const {
  double m = 0.0;
  for (const auto& e : elements) m = std::max(m, e.eta_sq());
  return std::sqrt(m);
}

namespace {

EstimatorReport estimate_impl(const Coefficients& coeffs,
                              const SolverConfig& config, const Mesh& mesh,
                              const DofMap& dofmap, const FieldVector& field) {
  const ElementData data = compute_element_data(coeffs, mesh);
  const bool nitsche = config.method == Method::nitsche;

  EstimatorReport report;
  report.elements.resize(mesh.num_triangles());
  report.n_dofs = dofmap.num_free();

  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    const double dK = data.d_mean[k];
    const double hK = data.h[k];
    auto& terms = report.elements[k];

    double residual = 0.0, obstacle = 0.0, complementarity = 0.0;
    for (int q = 0; q < ctx.nq(); ++q) {
      const double w = ctx.weight(q);
      const double p = ctx.field_value(q, field);
      const double lambda = recover_multiplier(coeffs, config, ctx, data, k, q,
                                               field, dofmap.degree);
      const double r = ctx.field_operator(q, field) + lambda + ctx.f(q);
      residual += w * r * r;
      if (nitsche) {
        if (p < coeffs.p_c) {
          // grad (p_c - p)_+ = -grad p where the constraint is violated
          const auto g = ctx.field_grad(q, field);
          obstacle += w * ctx.d3(q) * (g[0] * g[0] + coeffs.c * g[1] * g[1]);
        }
        complementarity += w * std::max(p - coeffs.p_c, 0.0) * lambda;
      }
    }
    terms.residual = hK * hK / (dK * dK * dK) * residual;
    terms.obstacle = obstacle;
    terms.complementarity = complementarity;
  }

  // Edge jumps: half of each interior edge integral goes to each neighbour.
  const EdgeRule& erule = edge_rule();
  for (int e = 0; e < static_cast<int>(mesh.interior_edges().size()); ++e) {
    const InteriorEdge& edge = mesh.interior_edges()[e];
    const double hE = edge_length(mesh, edge.v0, edge.v1);
    const double dE = mean_d_edge(coeffs, mesh, edge.v0, edge.v1);
    double integral = 0.0;
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const double jump =
          edge_flux_jump(coeffs, mesh, dofmap, field, e, erule.points[q]);
      integral += erule.weights[q] * hE * jump * jump;
    }
    const double scaled = hE / (dE * dE * dE) * integral;
    report.elements[edge.tri_a].edge += 0.5 * scaled;
    report.elements[edge.tri_b].edge += 0.5 * scaled;
  }

  double total_sq = 0.0;
  for (const auto& t : report.elements) total_sq += t.eta_sq();
  report.total = std::sqrt(total_sq);
  return report;
}

}  // namespace

EstimatorReport estimate_nitsche(const Coefficients& coeffs,
                                 const SolverConfig& config, const Mesh& mesh,
                                 const DofMap& dofmap,
                                 const FieldVector& field) {
  SolverConfig c = config;
  c.method = Method::nitsche;
  return estimate_impl(coeffs, c, mesh, dofmap, field);
}

EstimatorReport estimate_penalty(const Coefficients& coeffs,
                                 const SolverConfig& config, const Mesh& mesh,
                                 const DofMap& dofmap,
                                 const FieldVector& field) {
  SolverConfig c = config;
  c.method = Method::penalty;
  return estimate_impl(coeffs, c, mesh, dofmap, field);
}

EstimatorReport estimate(const Coefficients& coeffs, const SolverConfig& config,
                         const Mesh& mesh, const DofMap& dofmap,
                         const FieldVector& field) {
  return estimate_impl(coeffs, config, mesh, dofmap, field);
}

MarkSet mark(const EstimatorReport& report, double beta) {
  if (beta <= 0.0 || beta >= 1.0)
    throw std::invalid_argument("mark: beta must lie in (0,1)");
  const double threshold_sq = beta * beta * report.max_eta() * report.max_eta();
  MarkSet marks;
  for (int k = 0; k < static_cast<int>(report.elements.size()); ++k) {
    if (report.elements[k].eta_sq() > threshold_sq) marks.marked.insert(k);
  }
  return marks;
}

void write_report_csv(const EstimatorReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "element_id,term_residual,term_edge,term_obstacle,term_complementarity,eta_K\n";
  out.precision(17);
  for (int k = 0; k < static_cast<int>(report.elements.size()); ++k) {
    const auto& t = report.elements[k];
    out << k << ',' << t.residual << ',' << t.edge << ',' << t.obstacle << ','
        << t.complementarity << ',' << std::sqrt(t.eta_sq()) << '\n';
  }
  out << "# ndofs=" << report.n_dofs << " total=" << report.total << '\n';
}

}  // namespace cavifem
