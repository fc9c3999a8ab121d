#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cavifem/mesh.hpp"

namespace cavifem {

// Symmetric 6-point rule on the reference triangle, exact for degree 4.
// Weights sum to the reference area 1/2.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;  // barycentric
  std::vector<double> weights;
};

// 3-point Gauss rule on [0,1], exact for degree 5.  Weights sum to 1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
};

const QuadratureRule& triangle_rule();
const EdgeRule& edge_rule();

// Values, reference gradients and reference hessians (xx, xy, yy) of the
// Lagrange basis at a point of the reference triangle.
struct RefBasis {
  int n = 0;
  std::array<double, 6> value{};
  std::array<std::array<double, 2>, 6> grad{};
  std::array<std::array<double, 3>, 6> hess{};
};

RefBasis eval_basis(int degree, double xi, double eta);

inline RefBasis eval_basis(int degree, const std::array<double, 3>& bary) {
  return eval_basis(degree, bary[1], bary[2]);
}

// Affine map from the reference triangle onto element K.
struct ElementMap {
  Point origin;
  double jac[2][2];
  double inv[2][2];
  double det;

  Point to_physical(double xi, double eta) const {
    return {origin.x + jac[0][0] * xi + jac[0][1] * eta,
            origin.y + jac[1][0] * xi + jac[1][1] * eta};
  }
  Point to_physical(const std::array<double, 3>& bary) const {
    return to_physical(bary[1], bary[2]);
  }
  std::array<double, 2> to_reference(const Point& p) const {
    const double dx = p.x - origin.x, dy = p.y - origin.y;
    return {inv[0][0] * dx + inv[0][1] * dy, inv[1][0] * dx + inv[1][1] * dy};
  }
  std::array<double, 2> push_gradient(const std::array<double, 2>& g) const {
    return {inv[0][0] * g[0] + inv[1][0] * g[1],
            inv[0][1] * g[0] + inv[1][1] * g[1]};
  }
  // Hessian transform for the affine map: H_phys = inv^T H_ref inv.
  std::array<double, 3> push_hessian(const std::array<double, 3>& h) const;
};

ElementMap element_map(const Mesh& mesh, int k);

// Global degree-of-freedom numbering for P1/P2 Lagrange elements: vertex
// dofs first, then one dof per edge midpoint (P2 only).
struct DofMap {
  int degree = 1;
  int n_dofs = 0;
  std::vector<std::array<int, 6>> element_dofs;  // first 3 used for P1
  std::vector<char> dirichlet_mask;
  std::vector<Point> dof_points;
  std::map<EdgeKey, int> edge_dof;  // P2 only

  int dofs_per_element() const { return degree == 1 ? 3 : 6; }
  int num_free() const;
};

DofMap build_dofmap(const Mesh& mesh, int degree);

// Nodal interpolant of a scalar function.
std::vector<double> interpolate(const DofMap& dofmap,
                                const std::function<double(Point)>& f);

}  // namespace cavifem
