#include "cavifem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavifem {

namespace {

double dist(const Point& a, const Point& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

}  // namespace

double Mesh::triangle_area(int k) const {
  const Triangle& t = triangles_.at(k);
  return signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
}

double Mesh::element_diameter(int k) const {
  const Triangle& t = triangles_.at(k);
  double h = 0.0;
  for (int e = 0; e < 3; ++e)
    h = std::max(h, dist(vertices_[t[e]], vertices_[t[(e + 1) % 3]]));
  return h;
}

double Mesh::min_angle_deg() const {
  double worst = 180.0;
  for (const Triangle& t : triangles_) {
    for (int i = 0; i < 3; ++i) {
      const Point& a = vertices_[t[i]];
      const Point& b = vertices_[t[(i + 1) % 3]];
      const Point& c = vertices_[t[(i + 2) % 3]];
      const double ux = b.x - a.x, uy = b.y - a.y;
      const double vx = c.x - a.x, vy = c.y - a.y;
      const double cosang = (ux * vx + uy * vy) /
                            (std::hypot(ux, uy) * std::hypot(vx, vy));
      worst = std::min(worst, std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / M_PI);
    }
  }
  return worst;
}

void Mesh::finalize() {
  interior_edges_.clear();
  boundary_edges_.clear();
  boundary_vertex_.assign(vertices_.size(), 0);

  std::map<EdgeKey, std::vector<int>> adjacency;
  for (int k = 0; k < num_triangles(); ++k) {
    const Triangle& t = triangles_[k];
    if (signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]) <= 0.0)
      throw std::runtime_error("mesh: non-positive triangle area");
    for (int e = 0; e < 3; ++e)
      adjacency[make_edge_key(t[e], t[(e + 1) % 3])].push_back(k);
  }

  for (const auto& [key, tris] : adjacency) {
    if (tris.size() == 1) {
      boundary_edges_.push_back({key.first, key.second, tris[0]});
      boundary_vertex_[key.first] = 1;
      boundary_vertex_[key.second] = 1;
    } else if (tris.size() == 2) {
      interior_edges_.push_back({key.first, key.second, tris[0], tris[1]});
    } else {
      throw std::runtime_error("mesh: edge shared by more than two triangles");
    }
  }
}

Mesh build_rect_mesh(const Rect& domain, int nx, int ny) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_rect_mesh: nx and ny must be >= 1");
  if (domain.width() <= 0.0 || domain.height() <= 0.0)
    throw std::invalid_argument("build_rect_mesh: degenerate domain");

  Mesh m;
  m.vertices_.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Exact endpoints on the boundary.
      const double x = (i == nx) ? domain.x1 : domain.x0 + domain.width() * i / nx;
      const double y = (j == ny) ? domain.y1 : domain.y0 + domain.height() * j / ny;
      m.vertices_.push_back({x, y});
    }
  }
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      m.triangles_.push_back({v00, v10, v11});
      m.triangles_.push_back({v00, v11, v01});
    }
  }
  m.green_parent_.assign(m.triangles_.size(), Triangle{-1, -1, -1});
  m.finalize();
  return m;
}

// One refinement sweep.  The result can still be nonconforming when a
// bisected triangle's neighbour was split one level deeper; refine() below
// iterates sweeps until the mesh stops changing.
Mesh detail::refine_pass(const Mesh& mesh, const MarkSet& marks) {
  // Merge bisection triangles back into their parents; the working list holds
  // only four-way-split ancestry ("red" skeleton) triangles.
  std::vector<Triangle> skeleton;
  std::vector<char> marked;
  std::map<Triangle, int> parent_index;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Triangle& parent = mesh.green_parent_[k];
    int s;
    if (parent[0] >= 0) {
      auto it = parent_index.find(parent);
      if (it == parent_index.end()) {
        s = static_cast<int>(skeleton.size());
        parent_index.emplace(parent, s);
        skeleton.push_back(parent);
        marked.push_back(0);
      } else {
        s = it->second;
      }
    } else {
      s = static_cast<int>(skeleton.size());
      skeleton.push_back(mesh.triangles_[k]);
      marked.push_back(0);
    }
    if (marks.marked.count(k)) marked[s] = 1;
  }
  const int ns = static_cast<int>(skeleton.size());

  Mesh out;
  out.vertices_ = mesh.vertices_;
  out.edge_midpoint_ = mesh.edge_midpoint_;

  auto is_split = [&](const EdgeKey& e) { return out.edge_midpoint_.count(e) != 0; };

  // Longest edge (local index e = edge between vertices e and e+1).
  auto longest_edge = [&](const Triangle& t) {
    int best = 0;
    double len = -1.0;
    for (int e = 0; e < 3; ++e) {
      const double l = dist(out.vertices_[t[e]], out.vertices_[t[(e + 1) % 3]]);
      if (l > len * (1.0 + 1e-12)) {
        len = l;
        best = e;
      }
    }
    return best;
  };

  // Closure: grow the set of fully split triangles until every remaining one
  // has at most one split edge, located on its longest edge.
  std::vector<char> full(ns, 0);
  for (int s = 0; s < ns; ++s) full[s] = marked[s];
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<EdgeKey> split_now;
    for (int s = 0; s < ns; ++s) {
      if (!full[s]) continue;
      const Triangle& t = skeleton[s];
      for (int e = 0; e < 3; ++e)
        split_now.insert(make_edge_key(t[e], t[(e + 1) % 3]));
    }
    for (int s = 0; s < ns; ++s) {
      if (full[s]) continue;
      const Triangle& t = skeleton[s];
      int count = 0, split_local = -1;
      bool half_edge_split = false;
      for (int e = 0; e < 3; ++e) {
        const EdgeKey key = make_edge_key(t[e], t[(e + 1) % 3]);
        const auto mid = out.edge_midpoint_.find(key);
        const bool split = mid != out.edge_midpoint_.end() || split_now.count(key) != 0;
        if (split) {
          ++count;
          split_local = e;
        }
        // A neighbour refined one level deeper splits a half of this edge;
        // the triangle must then be split fully so the next sweep can
        // bisect the affected child through that half-edge.
        if (mid != out.edge_midpoint_.end()) {
          for (int v : {key.first, key.second}) {
            const EdgeKey half = make_edge_key(v, mid->second);
            if (is_split(half) || split_now.count(half)) half_edge_split = true;
          }
        }
      }
      if (half_edge_split || count >= 2 ||
          (count == 1 && split_local != longest_edge(t))) {
        full[s] = 1;
        changed = true;
      }
    }
  }

  auto midpoint = [&](int a, int b) {
    const EdgeKey key = make_edge_key(a, b);
    auto it = out.edge_midpoint_.find(key);
    if (it != out.edge_midpoint_.end()) return it->second;
    const Point& pa = out.vertices_[a];
    const Point& pb = out.vertices_[b];
    const int v = static_cast<int>(out.vertices_.size());
    out.vertices_.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    out.edge_midpoint_.emplace(key, v);
    return v;
  };

  // Create every midpoint first so bisected neighbours can find them.
  for (int s = 0; s < ns; ++s) {
    if (!full[s]) continue;
    const Triangle& t = skeleton[s];
    for (int e = 0; e < 3; ++e) midpoint(t[e], t[(e + 1) % 3]);
  }

  for (int s = 0; s < ns; ++s) {
    const Triangle& t = skeleton[s];
    if (full[s]) {
      const int m01 = midpoint(t[0], t[1]);
      const int m12 = midpoint(t[1], t[2]);
      const int m20 = midpoint(t[2], t[0]);
      out.triangles_.push_back({t[0], m01, m20});
      out.triangles_.push_back({m01, t[1], m12});
      out.triangles_.push_back({m20, m12, t[2]});
      out.triangles_.push_back({m01, m12, m20});
      for (int c = 0; c < 4; ++c) out.green_parent_.push_back({-1, -1, -1});
      continue;
    }
    int split_local = -1;
    for (int e = 0; e < 3; ++e) {
      if (is_split(make_edge_key(t[e], t[(e + 1) % 3]))) split_local = e;
    }
    if (split_local < 0) {
      out.triangles_.push_back(t);
      out.green_parent_.push_back({-1, -1, -1});
      continue;
    }
    // Bisect through the hanging node on the longest edge.
    const int a = t[split_local];
    const int b = t[(split_local + 1) % 3];
    const int c = t[(split_local + 2) % 3];
    const int m = out.edge_midpoint_.at(make_edge_key(a, b));
    out.triangles_.push_back({a, m, c});
    out.triangles_.push_back({m, b, c});
    out.green_parent_.push_back(t);
    out.green_parent_.push_back(t);
  }

  out.finalize();
  return out;
}

Mesh refine(const Mesh& mesh, const MarkSet& marks) {
  for (int k : marks.marked) {
    if (k < 0 || k >= mesh.num_triangles())
      throw std::invalid_argument("refine: mark index out of range");
  }
  Mesh current = detail::refine_pass(mesh, marks);
  // Conformity sweeps: resolve splits that were one level deeper than their
  // neighbours.  A sweep with no marks that changes nothing is a fixed point.
  while (true) {
    Mesh next = detail::refine_pass(current, MarkSet{});
    if (next.num_triangles() == current.num_triangles()) return current;
    current = std::move(next);
  }
}

double edge_length(const Mesh& mesh, int v0, int v1) {
  const Point& a = mesh.vertices().at(v0);
  const Point& b = mesh.vertices().at(v1);
  const double l = dist(a, b);
  if (l == 0.0) throw std::invalid_argument("edge_length: coincident endpoints");
  return l;
}

}  // namespace cavifem
