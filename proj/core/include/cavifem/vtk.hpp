#pragma once

#include <string>
#include <vector>

#include "cavifem/mesh.hpp"

namespace cavifem {

// Legacy ASCII VTK unstructured grid: mesh, one per-vertex scalar field and
// optionally one per-cell scalar field.
void write_vtk(const Mesh& mesh, const std::string& path,
               const std::vector<double>& vertex_scalars,
               const std::string& vertex_name,
               const std::vector<double>& cell_scalars = {},
               const std::string& cell_name = "");

void write_vtk_mesh(const Mesh& mesh, const std::string& path);

}  // namespace cavifem
