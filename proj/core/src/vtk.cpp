#include "cavifem/vtk.hpp"

#include <fstream>
#include <stdexcept>

namespace cavifem {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.precision(17);
  return out;
}

void write_grid(std::ofstream& out, const Mesh& mesh) {
  out << "# vtk DataFile Version 3.0\n";
  out << "cavifem output\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Point& p : mesh.vertices()) out << p.x << ' ' << p.y << " 0\n";
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles()
      << '\n';
  for (const Triangle& t : mesh.triangles())
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (int k = 0; k < mesh.num_triangles(); ++k) out << "5\n";
}

}  // namespace

void write_vtk(const Mesh& mesh, const std::string& path,
               const std::vector<double>& vertex_scalars,
               const std::string& vertex_name,
               const std::vector<double>& cell_scalars,
               const std::string& cell_name) {
  if (static_cast<int>(vertex_scalars.size()) != mesh.num_vertices())
    throw std::invalid_argument("write_vtk: vertex scalar size mismatch");
  auto out = open_or_throw(path);
  write_grid(out, mesh);
  out << "POINT_DATA " << mesh.num_vertices() << '\n';
  out << "SCALARS " << vertex_name << " double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (double v : vertex_scalars) out << v << '\n';
  if (!cell_scalars.empty()) {
    if (static_cast<int>(cell_scalars.size()) != mesh.num_triangles())
      throw std::invalid_argument("write_vtk: cell scalar size mismatch");
    out << "CELL_DATA " << mesh.num_triangles() << '\n';
    out << "SCALARS " << cell_name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : cell_scalars) out << v << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_vtk_mesh(const Mesh& mesh, const std::string& path) {
  auto out = open_or_throw(path);
  write_grid(out, mesh);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace cavifem
