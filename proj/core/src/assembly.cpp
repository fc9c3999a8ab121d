#include "cavifem/assembly.hpp"

#include <stdexcept>

namespace cavifem {

ElementContext::ElementContext(const Coefficients& coeffs, const Mesh& mesh,
                               const DofMap& dofmap, int k) {
  const QuadratureRule& rule = triangle_rule();
  const ElementMap map = element_map(mesh, k);
  nb_ = dofmap.dofs_per_element();
  dofs_ = dofmap.element_dofs.at(k);

  const int nq = static_cast<int>(rule.points.size());
  x_.resize(nq);
  weight_.resize(nq);
  d_.resize(nq);
  f_.resize(nq);
  value_.resize(nq * nb_);
  grad_.resize(nq * nb_);
  eop_.resize(nq * nb_);

  for (int q = 0; q < nq; ++q) {
    x_[q] = map.to_physical(rule.points[q]);
    weight_[q] = rule.weights[q] * map.det;
    d_[q] = coeffs.d(x_[q]);
    f_[q] = coeffs.f(x_[q]);
    const double d3 = d_[q] * d_[q] * d_[q];
    const double d3t = coeffs.d3_theta(x_[q]);

    const RefBasis basis = eval_basis(dofmap.degree, rule.points[q]);
    for (int i = 0; i < nb_; ++i) {
      value_[q * nb_ + i] = basis.value[i];
      const auto g = map.push_gradient(basis.grad[i]);
      grad_[q * nb_ + i] = g;
      const auto h = map.push_hessian(basis.hess[i]);
      // E q = (d^3)' q_theta + d^3 q_tt + c d^3 q_yy
      eop_[q * nb_ + i] = d3t * g[0] + d3 * (h[0] + coeffs.c * h[2]);
    }
  }
}

double ElementContext::field_value(int q, const FieldVector& u) const {
  double v = 0.0;
  for (int i = 0; i < nb_; ++i) v += u[dofs_[i]] * basis_value(q, i);
  return v;
}

std::array<double, 2> ElementContext::field_grad(int q, const FieldVector& u) const {
  std::array<double, 2> g{0.0, 0.0};
  for (int i = 0; i < nb_; ++i) {
    const auto& gi = basis_grad(q, i);
    g[0] += u[dofs_[i]] * gi[0];
    g[1] += u[dofs_[i]] * gi[1];
  }
  return g;
}

double ElementContext::field_operator(int q, const FieldVector& u) const {
  double v = 0.0;
  for (int i = 0; i < nb_; ++i) v += u[dofs_[i]] * basis_operator(q, i);
  return v;
}

SparseMatrix assemble_stiffness(const Coefficients& coeffs, const Mesh& mesh,
                                const DofMap& dofmap) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.num_triangles() * 36);
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    for (int q = 0; q < ctx.nq(); ++q) {
      const double w = ctx.weight(q);
      const double d3 = ctx.d3(q);
      for (int i = 0; i < ctx.nb(); ++i) {
        const auto& gi = ctx.basis_grad(q, i);
        for (int j = 0; j < ctx.nb(); ++j) {
          const auto& gj = ctx.basis_grad(q, j);
          const double v = w * d3 * (gi[0] * gj[0] + coeffs.c * gi[1] * gj[1]);
          triplets.emplace_back(ctx.dofs()[i], ctx.dofs()[j], v);
        }
      }
    }
  }
  SparseMatrix A(dofmap.n_dofs, dofmap.n_dofs);
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

FieldVector assemble_load(const Coefficients& coeffs, const Mesh& mesh,
                          const DofMap& dofmap) {
  return assemble_load(coeffs, mesh, dofmap, coeffs.f);
}

FieldVector assemble_load(const Coefficients& coeffs, const Mesh& mesh,
                          const DofMap& dofmap,
                          const std::function<double(Point)>& source) {
  FieldVector b = FieldVector::Zero(dofmap.n_dofs);
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    for (int q = 0; q < ctx.nq(); ++q) {
      const double w = ctx.weight(q) * source(ctx.x(q));
      for (int i = 0; i < ctx.nb(); ++i)
        b[ctx.dofs()[i]] += w * ctx.basis_value(q, i);
    }
  }
  return b;
}

double eval_operator(const Coefficients& coeffs, const Mesh& mesh,
                     const DofMap& dofmap, const FieldVector& field, int k,
                     const std::array<double, 3>& bary) {
  const ElementMap map = element_map(mesh, k);
  const RefBasis basis = eval_basis(dofmap.degree, bary);
  const Point x = map.to_physical(bary);
  const double d = coeffs.d(x);
  const double d3 = d * d * d;
  const double d3t = coeffs.d3_theta(x);
  const auto& dofs = dofmap.element_dofs.at(k);
  double v = 0.0;
  for (int i = 0; i < basis.n; ++i) {
    const auto g = map.push_gradient(basis.grad[i]);
    const auto h = map.push_hessian(basis.hess[i]);
    v += field[dofs[i]] * (d3t * g[0] + d3 * (h[0] + coeffs.c * h[2]));
  }
  return v;
}

double energy_norm(const Coefficients& coeffs, const Mesh& mesh,
                   const DofMap& dofmap, const FieldVector& field) {
  double acc = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    for (int q = 0; q < ctx.nq(); ++q) {
      const auto g = ctx.field_grad(q, field);
      acc += ctx.weight(q) * ctx.d3(q) * (g[0] * g[0] + coeffs.c * g[1] * g[1]);
    }
  }
  return std::sqrt(acc);
}

double energy_norm_error(
    const Coefficients& coeffs, const Mesh& mesh, const DofMap& dofmap,
    const FieldVector& field,
    const std::function<std::array<double, 2>(Point)>& exact_grad) {
  double acc = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementContext ctx(coeffs, mesh, dofmap, k);
    for (int q = 0; q < ctx.nq(); ++q) {
      const auto g = ctx.field_grad(q, field);
      const auto ge = exact_grad(ctx.x(q));
      const double ex = g[0] - ge[0], ey = g[1] - ge[1];
      acc += ctx.weight(q) * ctx.d3(q) * (ex * ex + coeffs.c * ey * ey);
    }
  }
  return std::sqrt(acc);
}

double edge_flux_jump(const Coefficients& coeffs, const Mesh& mesh,
                      const DofMap& dofmap, const FieldVector& field,
                      int interior_edge, double s) {
  const InteriorEdge& e = mesh.interior_edges().at(interior_edge);
  const Point& a = mesh.vertices()[e.v0];
  const Point& b = mesh.vertices()[e.v1];
  const Point x{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const double nx = (b.y - a.y) / len;
  const double ny = -(b.x - a.x) / len;

  const double d = coeffs.d(x);
  const double d3 = d * d * d;

  auto side_flux = [&](int k) {
    const ElementMap map = element_map(mesh, k);
    const auto ref = map.to_reference(x);
    const RefBasis basis = eval_basis(dofmap.degree, ref[0], ref[1]);
    const auto& dofs = dofmap.element_dofs.at(k);
    double gx = 0.0, gy = 0.0;
    for (int i = 0; i < basis.n; ++i) {
      const auto g = map.push_gradient(basis.grad[i]);
      gx += field[dofs[i]] * g[0];
      gy += field[dofs[i]] * g[1];
    }
    return d3 * gx * nx + coeffs.c * d3 * gy * ny;
  };
  return side_flux(e.tri_a) - side_flux(e.tri_b);
}

}  // namespace cavifem
