#pragma once

#include <cmath>
#include <functional>

#include "cavifem/mesh.hpp"
#include "cavifem/space.hpp"

namespace cavifem {

// Journal bearing slice: film thickness d(theta) = 1 + eps*cos(theta - phase)
// on [0, psi] x [0, 1], anisotropy factor c = (R/L)^2, constraint p >= p_c.
// The default phase places the minimum film thickness at psi/2 + 0.548388...,
// i.e. an attitude angle of 0.548388... rad downstream of the pad centre, so
// phase = pi + psi/2 + 0.548388...
struct ProblemSpec {
  double psi = 2.0 * M_PI / 3.0;
  double eccentricity = 0.9;
  double phase = M_PI + M_PI / 3.0 + 0.548388888888889;
  double aspect_factor = 0.25;  // c = (R/L)^2
  double p_c = 0.0;

  // Test hooks: joint scaling d -> d_scale*d, f -> f_scale*f.
  double d_scale = 1.0;
  double f_scale = 1.0;

  Rect domain() const { return {0.0, 0.0, psi, 1.0}; }
  void validate() const;
};

// Coefficient evaluators consumed by assembly, solver and estimator.  The
// diffusion tensor is D = d^3 * diag(1, c); div_d_theta is the analytic
// theta-derivative of d.
struct Coefficients {
  std::function<double(Point)> d;
  std::function<double(Point)> d_theta;
  std::function<double(Point)> f;
  double c = 1.0;
  double p_c = 0.0;

  double d3(Point p) const {
    const double v = d(p);
    return v * v * v;
  }
  // d/dtheta of d^3
  double d3_theta(Point p) const {
    const double v = d(p);
    return 3.0 * v * v * d_theta(p);
  }
};

Coefficients make_coefficients(const ProblemSpec& spec);

// Quadrature-weighted mean of d over element K / edge (v0,v1).
double mean_d_element(const Coefficients& coeffs, const Mesh& mesh, int k);
double mean_d_edge(const Coefficients& coeffs, const Mesh& mesh, int v0, int v1);

// Per-element sizes h_K and mean coefficients d_K used in every
// stabilization and estimator scaling.
struct ElementData {
  std::vector<double> h;
  std::vector<double> d_mean;
};

ElementData compute_element_data(const Coefficients& coeffs, const Mesh& mesh);

// max over elements of (max_K d)/(min_K d), sampled at quadrature points;
// a quasi-uniformity diagnostic.
double thickness_variation(const Coefficients& coeffs, const Mesh& mesh);

}  // namespace cavifem
