#include "cavifem/problem.hpp"

#include <algorithm>
#include <stdexcept>

namespace cavifem {

void ProblemSpec::validate() const {
  if (eccentricity <= 0.0 || eccentricity >= 1.0)
    throw std::invalid_argument("ProblemSpec: eccentricity must lie in (0,1)");
  if (psi <= 0.0 || psi > 2.0 * M_PI)
    throw std::invalid_argument("ProblemSpec: psi must lie in (0, 2*pi]");
  if (aspect_factor <= 0.0)
    throw std::invalid_argument("ProblemSpec: aspect_factor must be positive");
  if (d_scale <= 0.0)
    throw std::invalid_argument("ProblemSpec: d_scale must be positive");
}

Coefficients make_coefficients(const ProblemSpec& spec) {
  spec.validate();
  const double eps = spec.eccentricity;
  const double phi = spec.phase;
  const double sd = spec.d_scale;
  const double sf = spec.f_scale;
  Coefficients c;
  c.d = [eps, phi, sd](Point p) { return sd * (1.0 + eps * std::cos(p.x - phi)); };
  c.d_theta = [eps, phi, sd](Point p) { return -sd * eps * std::sin(p.x - phi); };
  // f = -6 d/dtheta of the unscaled thickness
  c.f = [eps, phi, sf](Point p) { return sf * 6.0 * eps * std::sin(p.x - phi); };
  c.c = spec.aspect_factor;
  c.p_c = spec.p_c;
  return c;
}

double mean_d_element(const Coefficients& coeffs, const Mesh& mesh, int k) {
  const QuadratureRule& rule = triangle_rule();
  const ElementMap map = element_map(mesh, k);
  double num = 0.0, den = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    num += rule.weights[q] * coeffs.d(map.to_physical(rule.points[q]));
    den += rule.weights[q];
  }
  return num / den;
}

double mean_d_edge(const Coefficients& coeffs, const Mesh& mesh, int v0, int v1) {
  const EdgeRule& rule = edge_rule();
  const Point& a = mesh.vertices().at(v0);
  const Point& b = mesh.vertices().at(v1);
  double num = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double s = rule.points[q];
    num += rule.weights[q] *
           coeffs.d({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)});
  }
  return num;
}

ElementData compute_element_data(const Coefficients& coeffs, const Mesh& mesh) {
  ElementData data;
  const int nt = mesh.num_triangles();
  data.h.resize(nt);
  data.d_mean.resize(nt);
  for (int k = 0; k < nt; ++k) {
    data.h[k] = mesh.element_diameter(k);
    data.d_mean[k] = mean_d_element(coeffs, mesh, k);
  }
  return data;
}

double thickness_variation(const Coefficients& coeffs, const Mesh& mesh) {
  const QuadratureRule& rule = triangle_rule();
  double worst = 1.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementMap map = element_map(mesh, k);
    double lo = 0.0, hi = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double v = coeffs.d(map.to_physical(rule.points[q]));
      if (q == 0) lo = hi = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

}  // namespace cavifem
