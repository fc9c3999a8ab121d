#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cavifem/problem.hpp"

using namespace cavifem;

TEST_CASE("default film thickness and source match the closed forms") {
  const ProblemSpec spec;
  const Coefficients coeffs = make_coefficients(spec);
  CHECK(spec.phase == doctest::Approx(4.737179093675279).epsilon(1e-15));
  CHECK(coeffs.c == doctest::Approx(0.25));
  CHECK(coeffs.p_c == 0.0);

  // Frozen values of d, d', f at sample angles (independent evaluation).
  CHECK(coeffs.d({0.0, 0.3}) == doctest::Approx(1.022308816818182).epsilon(1e-14));
  CHECK(coeffs.d_theta({0.0, 0.3}) ==
        doctest::Approx(-0.8997234667897536).epsilon(1e-14));
  CHECK(coeffs.f({0.0, 0.3}) == doctest::Approx(5.398340800738522).epsilon(1e-14));
  CHECK(coeffs.d({0.7, 0.9}) == doctest::Approx(0.4374449533221749).epsilon(1e-14));
  CHECK(coeffs.f({0.7, 0.9}) == doctest::Approx(4.21510919199766).epsilon(1e-14));
  // The film minimum sits inside the domain.
  CHECK(coeffs.d({1.5956, 0.5}) == doctest::Approx(0.1).epsilon(1e-8));
  // Coefficients do not depend on y.
  CHECK(coeffs.d({0.7, 0.1}) == coeffs.d({0.7, 0.8}));
}

TEST_CASE("cubed-thickness helpers are consistent derivatives") {
  const Coefficients coeffs = make_coefficients(ProblemSpec{});
  const Point p{0.9, 0.5};
  const double d = coeffs.d(p);
  CHECK(coeffs.d3(p) == doctest::Approx(d * d * d).epsilon(1e-14));
  const double h = 1e-6;
  const double fd =
      (coeffs.d3({p.x + h, p.y}) - coeffs.d3({p.x - h, p.y})) / (2.0 * h);
  CHECK(coeffs.d3_theta(p) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("scaling hooks multiply thickness and source") {
  ProblemSpec spec;
  spec.d_scale = 2.0;
  spec.f_scale = 8.0;
  const Coefficients base = make_coefficients(ProblemSpec{});
  const Coefficients scaled = make_coefficients(spec);
  const Point p{1.1, 0.4};
  CHECK(scaled.d(p) == doctest::Approx(2.0 * base.d(p)).epsilon(1e-14));
  CHECK(scaled.d3(p) == doctest::Approx(8.0 * base.d3(p)).epsilon(1e-14));
  CHECK(scaled.f(p) == doctest::Approx(8.0 * base.f(p)).epsilon(1e-14));
}

TEST_CASE("invalid problem parameters are rejected") {
  ProblemSpec spec;
  spec.eccentricity = 1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = ProblemSpec{};
  spec.psi = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = ProblemSpec{};
  spec.aspect_factor = -1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  CHECK_NOTHROW(ProblemSpec{}.validate());
}

TEST_CASE("element means sample the thickness with the bulk rule") {
  const ProblemSpec spec;
  const Coefficients coeffs = make_coefficients(spec);
  const Mesh mesh = build_rect_mesh(spec.domain(), 2, 2);
  // Frozen quadrature mean of d over the first triangle of the 2x2 grid.
  CHECK(mean_d_element(coeffs, mesh, 0) ==
        doctest::Approx(0.4546696469625385).epsilon(1e-13));

  const ElementData data = compute_element_data(coeffs, mesh);
  REQUIRE(static_cast<int>(data.h.size()) == mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    CHECK(data.h[k] == doctest::Approx(mesh.element_diameter(k)));
    CHECK(data.d_mean[k] == doctest::Approx(mean_d_element(coeffs, mesh, k)));
    CHECK(data.d_mean[k] > 0.0);
  }

  // An edge mean lies between the endpoint values for the monotone stretch.
  const auto& e = mesh.interior_edges().front();
  const double m = mean_d_edge(coeffs, mesh, e.v0, e.v1);
  CHECK(m > 0.0);
  CHECK(m < 2.0);
}

TEST_CASE("thickness variation measures in-element contrast") {
  const ProblemSpec spec;
  const Coefficients coeffs = make_coefficients(spec);
  const Mesh coarse = build_rect_mesh(spec.domain(), 2, 2);
  const Mesh fine = build_rect_mesh(spec.domain(), 16, 2);
  CHECK(thickness_variation(coeffs, coarse) >= 1.0);
  // Smaller elements see less of the cosine profile.
  CHECK(thickness_variation(coeffs, fine) < thickness_variation(coeffs, coarse));
}
