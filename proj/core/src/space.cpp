#include "cavifem/space.hpp"

#include <cmath>
#include <stdexcept>

namespace cavifem {

const QuadratureRule& triangle_rule() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const double a1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322;
    auto add = [&r](double a, double w) {
      r.points.push_back({1.0 - 2.0 * a, a, a});
      r.points.push_back({a, 1.0 - 2.0 * a, a});
      r.points.push_back({a, a, 1.0 - 2.0 * a});
      for (int i = 0; i < 3; ++i) r.weights.push_back(0.5 * w);
    };
    add(a1, w1);
    add(a2, w2);
    return r;
  }();
  return rule;
}

const EdgeRule& edge_rule() {
  static const EdgeRule rule = [] {
    EdgeRule r;
    const double s = std::sqrt(0.6);
    r.points = {0.5 * (1.0 - s), 0.5, 0.5 * (1.0 + s)};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

RefBasis eval_basis(int degree, double xi, double eta) {
  RefBasis b;
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  // Barycentric gradients on the reference element.
  static const double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  const double l[3] = {l0, l1, l2};

  if (degree == 1) {
    b.n = 3;
    for (int i = 0; i < 3; ++i) {
      b.value[i] = l[i];
      b.grad[i] = {dl[i][0], dl[i][1]};
      b.hess[i] = {0.0, 0.0, 0.0};
    }
    return b;
  }
  if (degree != 2) throw std::invalid_argument("eval_basis: degree must be 1 or 2");

  b.n = 6;
  for (int i = 0; i < 3; ++i) {
    b.value[i] = l[i] * (2.0 * l[i] - 1.0);
    const double c = 4.0 * l[i] - 1.0;
    b.grad[i] = {c * dl[i][0], c * dl[i][1]};
    b.hess[i] = {4.0 * dl[i][0] * dl[i][0], 4.0 * dl[i][0] * dl[i][1],
                 4.0 * dl[i][1] * dl[i][1]};
  }
  // Edge bubbles in local edge order (0,1), (1,2), (2,0).
  static const int ev[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int e = 0; e < 3; ++e) {
    const int i = ev[e][0], j = ev[e][1];
    b.value[3 + e] = 4.0 * l[i] * l[j];
    b.grad[3 + e] = {4.0 * (l[j] * dl[i][0] + l[i] * dl[j][0]),
                     4.0 * (l[j] * dl[i][1] + l[i] * dl[j][1])};
    b.hess[3 + e] = {8.0 * dl[i][0] * dl[j][0],
                     4.0 * (dl[i][0] * dl[j][1] + dl[i][1] * dl[j][0]),
                     8.0 * dl[i][1] * dl[j][1]};
  }
  return b;
}

std::array<double, 3> ElementMap::push_hessian(const std::array<double, 3>& h) const {
  // inv^T [hxx hxy; hxy hyy] inv
  const double a = inv[0][0], b = inv[0][1], c = inv[1][0], d = inv[1][1];
  const double hxx = h[0], hxy = h[1], hyy = h[2];
  // rows of inv^T are (a, c) and (b, d)
  const double t00 = a * hxx + c * hxy, t01 = a * hxy + c * hyy;
  const double t10 = b * hxx + d * hxy, t11 = b * hxy + d * hyy;
  return {t00 * a + t01 * c, t00 * b + t01 * d, t10 * b + t11 * d};
}

ElementMap element_map(const Mesh& mesh, int k) {
  const Triangle& t = mesh.triangles().at(k);
  const Point& p0 = mesh.vertices()[t[0]];
  const Point& p1 = mesh.vertices()[t[1]];
  const Point& p2 = mesh.vertices()[t[2]];
  ElementMap m;
  m.origin = p0;
  m.jac[0][0] = p1.x - p0.x;
  m.jac[0][1] = p2.x - p0.x;
  m.jac[1][0] = p1.y - p0.y;
  m.jac[1][1] = p2.y - p0.y;
  m.det = m.jac[0][0] * m.jac[1][1] - m.jac[0][1] * m.jac[1][0];
  if (m.det == 0.0) throw std::runtime_error("element_map: degenerate Jacobian");
  m.inv[0][0] = m.jac[1][1] / m.det;
  m.inv[0][1] = -m.jac[0][1] / m.det;
  m.inv[1][0] = -m.jac[1][0] / m.det;
  m.inv[1][1] = m.jac[0][0] / m.det;
  return m;
}

int DofMap::num_free() const {
  int n = 0;
  for (char m : dirichlet_mask)
    if (!m) ++n;
  return n;
}

DofMap build_dofmap(const Mesh& mesh, int degree) {
  if (degree != 1 && degree != 2)
    throw std::invalid_argument("build_dofmap: degree must be 1 or 2");

  DofMap dm;
  dm.degree = degree;
  const int nv = mesh.num_vertices();
  dm.n_dofs = nv;

  if (degree == 2) {
    // Deterministic edge numbering by sorted vertex pair.
    for (const auto& e : mesh.interior_edges())
      dm.edge_dof.emplace(make_edge_key(e.v0, e.v1), -1);
    for (const auto& e : mesh.boundary_edges())
      dm.edge_dof.emplace(make_edge_key(e.v0, e.v1), -1);
    for (auto& [key, dof] : dm.edge_dof) dof = dm.n_dofs++;
  }

  dm.element_dofs.resize(mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Triangle& t = mesh.triangles()[k];
    auto& ed = dm.element_dofs[k];
    ed = {t[0], t[1], t[2], -1, -1, -1};
    if (degree == 2) {
      static const int ev[3][2] = {{0, 1}, {1, 2}, {2, 0}};
      for (int e = 0; e < 3; ++e)
        ed[3 + e] = dm.edge_dof.at(make_edge_key(t[ev[e][0]], t[ev[e][1]]));
    }
  }

  dm.dirichlet_mask.assign(dm.n_dofs, 0);
  dm.dof_points.resize(dm.n_dofs);
  for (int v = 0; v < nv; ++v) {
    dm.dof_points[v] = mesh.vertices()[v];
    if (mesh.vertex_on_boundary(v)) dm.dirichlet_mask[v] = 1;
  }
  if (degree == 2) {
    for (const auto& [key, dof] : dm.edge_dof) {
      const Point& a = mesh.vertices()[key.first];
      const Point& b = mesh.vertices()[key.second];
      dm.dof_points[dof] = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    }
    for (const auto& e : mesh.boundary_edges())
      dm.dirichlet_mask[dm.edge_dof.at(make_edge_key(e.v0, e.v1))] = 1;
  }
  return dm;
}

std::vector<double> interpolate(const DofMap& dofmap,
                                const std::function<double(Point)>& f) {
  std::vector<double> coeffs(dofmap.n_dofs);
  for (int i = 0; i < dofmap.n_dofs; ++i) coeffs[i] = f(dofmap.dof_points[i]);
  return coeffs;
}

}  // namespace cavifem
