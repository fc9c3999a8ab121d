#pragma once

#include "cavifem/problem.hpp"

namespace cavifem {

// Unconstrained verification problem with a known solution
// p(theta, y) = sin(pi theta / psi) sin(pi y) and the source chosen as
// -E p for the spec's coefficients, so the discrete energy error can be
// measured exactly.
struct ManufacturedCase {
  Coefficients coeffs;
  std::function<double(Point)> exact;
  std::function<std::array<double, 2>(Point)> exact_grad;
  std::function<double(Point)> source;
};

inline ManufacturedCase manufactured_case(const ProblemSpec& spec) {
  ManufacturedCase mc;
  mc.coeffs = make_coefficients(spec);
  const double kx = M_PI / spec.psi;
  const double ky = M_PI;
  const double c = spec.aspect_factor;
  const Coefficients coeffs = mc.coeffs;

  mc.exact = [kx, ky](Point p) {
    return std::sin(kx * p.x) * std::sin(ky * p.y);
  };
  mc.exact_grad = [kx, ky](Point p) {
    return std::array<double, 2>{kx * std::cos(kx * p.x) * std::sin(ky * p.y),
                                 ky * std::sin(kx * p.x) * std::cos(ky * p.y)};
  };
  mc.source = [kx, ky, c, coeffs](Point p) {
    const double d = coeffs.d(p);
    const double d3 = d * d * d;
    const double s = std::sin(kx * p.x) * std::sin(ky * p.y);
    const double px = kx * std::cos(kx * p.x) * std::sin(ky * p.y);
    const double pxx = -kx * kx * s;
    const double pyy = -ky * ky * s;
    return -(coeffs.d3_theta(p) * px + d3 * (pxx + c * pyy));
  };
  return mc;
}

}  // namespace cavifem
