#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dynbc/state_space.hpp"

namespace dynbc {

// Legacy VTK 2.0 ASCII unstructured grid with point-data scalars. Fields are
// free-dof vectors; Dirichlet vertices are written as zero.
void write_vtk(std::ostream& out, const Mesh& mesh, const DofMap& dofmap,
               const std::vector<std::pair<std::string, Eigen::VectorXd>>& fields);

// RFC-4180 rows: quoted on demand, CRLF line endings.
void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace dynbc
