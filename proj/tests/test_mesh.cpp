#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "cavifem/mesh.hpp"

using namespace cavifem;

namespace {

const Rect kDomain{0.0, 0.0, 2.0 * M_PI / 3.0, 1.0};

double total_area(const Mesh& mesh) {
  double a = 0.0;
  for (int k = 0; k < mesh.num_triangles(); ++k) a += mesh.triangle_area(k);
  return a;
}

// A mesh is nonconforming when a vertex sits in the middle of a neighbour's
// edge; detect it by matching edge midpoints against vertex coordinates.
bool has_hanging_nodes(const Mesh& mesh) {
  std::map<std::pair<long long, long long>, int> coord_to_vertex;
  auto key = [](const Point& p) {
    return std::make_pair(static_cast<long long>(std::llround(p.x * 1e12)),
                          static_cast<long long>(std::llround(p.y * 1e12)));
  };
  for (int v = 0; v < mesh.num_vertices(); ++v)
    coord_to_vertex[key(mesh.vertices()[v])] = v;
  for (const Triangle& t : mesh.triangles()) {
    for (int e = 0; e < 3; ++e) {
      const Point& a = mesh.vertices()[t[e]];
      const Point& b = mesh.vertices()[t[(e + 1) % 3]];
      const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
      if (coord_to_vertex.count(key(mid))) return true;
    }
  }
  return false;
}

// Index of the triangle whose centroid is nearest to (x, y).
int nearest_triangle(const Mesh& mesh, double x, double y) {
  int best = 0;
  double dist = 1e300;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Triangle& t = mesh.triangles()[k];
    double cx = 0.0, cy = 0.0;
    for (int v : t) {
      cx += mesh.vertices()[v].x / 3.0;
      cy += mesh.vertices()[v].y / 3.0;
    }
    const double d = std::hypot(cx - x, cy - y);
    if (d < dist) {
      dist = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("structured mesh has the expected counts") {
  const Mesh mesh = build_rect_mesh(kDomain, 12, 8);
  CHECK(mesh.num_vertices() == 13 * 9);
  CHECK(mesh.num_triangles() == 2 * 12 * 8);
  CHECK(mesh.boundary_edges().size() == 2 * (12 + 8));
  // 3T = 2*interior + boundary
  CHECK(mesh.interior_edges().size() == (3 * 192 - 40) / 2);
  int nb = 0;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.vertex_on_boundary(v)) ++nb;
  CHECK(nb == 40);
}

TEST_CASE("triangle areas are positive and tile the domain") {
  const Mesh mesh = build_rect_mesh(kDomain, 7, 5);
  for (int k = 0; k < mesh.num_triangles(); ++k)
    CHECK(mesh.triangle_area(k) > 0.0);
  CHECK(total_area(mesh) == doctest::Approx(2.0943951023931953).epsilon(1e-13));
}

TEST_CASE("degenerate construction arguments are rejected") {
  CHECK_THROWS_AS(build_rect_mesh(kDomain, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_rect_mesh({0, 0, 0, 1}, 2, 2), std::invalid_argument);
  const Mesh mesh = build_rect_mesh(kDomain, 2, 2);
  CHECK_THROWS_AS(edge_length(mesh, 0, 0), std::invalid_argument);
  MarkSet bad;
  bad.marked.insert(mesh.num_triangles());
  CHECK_THROWS_AS(refine(mesh, bad), std::invalid_argument);
}

TEST_CASE("refining with no marks changes nothing") {
  const Mesh mesh = build_rect_mesh(kDomain, 4, 3);
  const Mesh out = refine(mesh, MarkSet{});
  CHECK(out.num_triangles() == mesh.num_triangles());
  CHECK(out.num_vertices() == mesh.num_vertices());
}

TEST_CASE("a single mark yields a conforming refinement") {
  const Mesh mesh = build_rect_mesh(kDomain, 4, 3);
  MarkSet marks;
  marks.marked.insert(5);
  const Mesh out = refine(mesh, marks);
  CHECK(out.num_triangles() > mesh.num_triangles());
  CHECK_FALSE(has_hanging_nodes(out));
  CHECK(total_area(out) == doctest::Approx(total_area(mesh)).epsilon(1e-13));
  // The marked triangle became four children of a quarter of its area.
  const double child = mesh.triangle_area(5) / 4.0;
  int quarters = 0;
  for (int k = 0; k < out.num_triangles(); ++k)
    if (std::abs(out.triangle_area(k) - child) < 1e-14) ++quarters;
  CHECK(quarters >= 4);
}

TEST_CASE("uniform refinement quadruples the mesh") {
  const Mesh mesh = build_rect_mesh(kDomain, 3, 2);
  MarkSet all;
  for (int k = 0; k < mesh.num_triangles(); ++k) all.marked.insert(k);
  const Mesh out = refine(mesh, all);
  CHECK(out.num_triangles() == 4 * mesh.num_triangles());
  CHECK_FALSE(has_hanging_nodes(out));
  CHECK(out.min_angle_deg() == doctest::Approx(mesh.min_angle_deg()));
}

TEST_CASE("repeated marking keeps conformity and the minimum angle") {
  Mesh mesh = build_rect_mesh(kDomain, 6, 4);
  const double floor = mesh.min_angle_deg();
  REQUIRE(floor > 20.0);
  for (int round = 0; round < 8; ++round) {
    MarkSet marks;
    for (int k = 0; k < mesh.num_triangles(); k += 3) marks.marked.insert(k);
    mesh = refine(mesh, marks);
    CHECK_FALSE(has_hanging_nodes(mesh));
    CHECK(mesh.min_angle_deg() >= floor - 1e-9);
  }
  // Summation roundoff grows with the element count.
  CHECK(total_area(mesh) == doctest::Approx(2.0943951023931953).epsilon(1e-9));
}

TEST_CASE("deep local refinement stays conforming across level jumps") {
  // Repeatedly refining around one point builds steep level differences and
  // forces bisected elements to be split again through their half-edges.
  Mesh mesh = build_rect_mesh(kDomain, 6, 4);
  const double floor = mesh.min_angle_deg();
  const double px = 1.3, py = 0.45;
  for (int round = 0; round < 9; ++round) {
    MarkSet marks;
    marks.marked.insert(nearest_triangle(mesh, px, py));
    mesh = refine(mesh, marks);
    CHECK_FALSE(has_hanging_nodes(mesh));
    CHECK(mesh.min_angle_deg() >= floor - 1e-9);
  }
  CHECK(total_area(mesh) == doctest::Approx(2.0943951023931953).epsilon(1e-12));
}

TEST_CASE("element diameter is the longest edge") {
  const Mesh mesh = build_rect_mesh({0, 0, 3, 4}, 1, 1);
  // Right triangles with legs 3 and 4: hypotenuse 5.
  CHECK(mesh.element_diameter(0) == doctest::Approx(5.0));
  CHECK(edge_length(mesh, 0, 1) == doctest::Approx(3.0));
}
