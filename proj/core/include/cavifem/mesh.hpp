#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cavifem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

// Counterclockwise vertex indices.
using Triangle = std::array<int, 3>;

// Sorted vertex index pair identifying an edge.
using EdgeKey = std::pair<int, int>;

inline EdgeKey make_edge_key(int a, int b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

struct InteriorEdge {
  int v0, v1;      // endpoints
  int tri_a;       // first adjacent triangle (defines jump orientation)
  int tri_b;       // second adjacent triangle
};

struct BoundaryEdge {
  int v0, v1;
  int tri;         // the single adjacent triangle
};

struct MarkSet {
  std::set<int> marked;
};

class Mesh;

namespace detail {
// One refinement sweep; may leave hanging nodes that refine() resolves.
Mesh refine_pass(const Mesh& mesh, const MarkSet& marks);
}  // namespace detail

// Conforming triangulation of a rectangle.  Refinement splits marked
// triangles into four similar children; conformity is restored by bisecting
// neighbours through a hanging node on their longest edge, and by promoting
// to a full split otherwise so that the minimum angle of the initial mesh is
// never degraded.  Bisection ("green") triangles are merged back into their
// parent before they are ever refined again.
class Mesh {
public:
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<InteriorEdge>& interior_edges() const { return interior_edges_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  bool vertex_on_boundary(int v) const { return boundary_vertex_[v] != 0; }

  double triangle_area(int k) const;

  // Longest edge length of triangle k (the local mesh size).
  double element_diameter(int k) const;

  // Smallest interior angle over all triangles, in degrees.
  double min_angle_deg() const;

  friend Mesh build_rect_mesh(const Rect& domain, int nx, int ny);
  friend Mesh refine(const Mesh& mesh, const MarkSet& marks);
  friend Mesh detail::refine_pass(const Mesh& mesh, const MarkSet& marks);

private:
  void finalize();  // rebuild edge topology and boundary flags

  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<InteriorEdge> interior_edges_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<char> boundary_vertex_;

  // Bisection triangles remember the vertex triple of the parent they came
  // from ({-1,-1,-1} otherwise) so refine() can merge them back first.
  std::vector<Triangle> green_parent_;

  // Midpoint vertex of every edge that has ever been split.
  std::map<EdgeKey, int> edge_midpoint_;
};

// Structured triangulation: (nx+1)*(ny+1) vertices, 2*nx*ny triangles, each
// cell split along its bottom-left to top-right diagonal.  The whole outer
// boundary is tagged Dirichlet.
Mesh build_rect_mesh(const Rect& domain, int nx, int ny);

// Refine every marked triangle into four similar children and restore
// conformity.  An empty mark set returns an equal mesh.
Mesh refine(const Mesh& mesh, const MarkSet& marks);

double edge_length(const Mesh& mesh, int v0, int v1);

}  // namespace cavifem
