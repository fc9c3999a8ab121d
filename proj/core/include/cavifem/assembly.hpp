#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavifem/problem.hpp"
#include "cavifem/space.hpp"

namespace cavifem {

using FieldVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Full-size symmetric system; Dirichlet dofs are eliminated at solve time.
struct LinearSystem {
  SparseMatrix matrix;
  FieldVector rhs;
};

// Per-element quadrature workspace: physical points, measure-scaled weights
// and basis values/gradients plus the strong operator E applied to each
// basis function, E q = div(D grad q) with D = d^3 diag(1, c).
class ElementContext {
public:
  ElementContext(const Coefficients& coeffs, const Mesh& mesh,
                 const DofMap& dofmap, int k);

  int nq() const { return static_cast<int>(weight_.size()); }
  int nb() const { return nb_; }
  const std::array<int, 6>& dofs() const { return dofs_; }

  Point x(int q) const { return x_[q]; }
  double weight(int q) const { return weight_[q]; }
  double d(int q) const { return d_[q]; }
  double d3(int q) const { return d_[q] * d_[q] * d_[q]; }
  double f(int q) const { return f_[q]; }

  double basis_value(int q, int i) const { return value_[q * nb_ + i]; }
  const std::array<double, 2>& basis_grad(int q, int i) const {
    return grad_[q * nb_ + i];
  }
  double basis_operator(int q, int i) const { return eop_[q * nb_ + i]; }

  double field_value(int q, const FieldVector& u) const;
  std::array<double, 2> field_grad(int q, const FieldVector& u) const;
  double field_operator(int q, const FieldVector& u) const;

private:
  int nb_;
  std::array<int, 6> dofs_;
  std::vector<Point> x_;
  std::vector<double> weight_, d_, f_;
  std::vector<double> value_;
  std::vector<std::array<double, 2>> grad_;
  std::vector<double> eop_;
};

SparseMatrix assemble_stiffness(const Coefficients& coeffs, const Mesh& mesh,
                                const DofMap& dofmap);

// Load vector for the coefficient's own f, or an arbitrary source term.
FieldVector assemble_load(const Coefficients& coeffs, const Mesh& mesh,
                          const DofMap& dofmap);
FieldVector assemble_load(const Coefficients& coeffs, const Mesh& mesh,
                          const DofMap& dofmap,
                          const std::function<double(Point)>& source);

// Strong operator E applied to a discrete field at a barycentric point of
// element k.  For P1 the second-order part vanishes.
double eval_operator(const Coefficients& coeffs, const Mesh& mesh,
                     const DofMap& dofmap, const FieldVector& field, int k,
                     const std::array<double, 3>& bary);

// sqrt of int_Omega D grad r . grad r
double energy_norm(const Coefficients& coeffs, const Mesh& mesh,
                   const DofMap& dofmap, const FieldVector& field);

// Energy-norm distance between a discrete field and an analytic gradient.
double energy_norm_error(
    const Coefficients& coeffs, const Mesh& mesh, const DofMap& dofmap,
    const FieldVector& field,
    const std::function<std::array<double, 2>(Point)>& exact_grad);

// Jump of the normal flux D grad p . n across interior edge e at parameter
// s in [0,1] along the edge.  The sign depends on the stored adjacency
// order; squared quantities are orientation independent.
double edge_flux_jump(const Coefficients& coeffs, const Mesh& mesh,
                      const DofMap& dofmap, const FieldVector& field,
                      int interior_edge, double s);

}  // namespace cavifem
