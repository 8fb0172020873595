#include "dynbc/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dynbc {

void write_vtk(std::ostream& out, const Mesh& mesh, const DofMap& dofmap,
               const std::vector<std::pair<std::string, Eigen::VectorXd>>& fields) {
    out << "# vtk DataFile Version 2.0\n";
    out << "dynbc field output\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.vertices.size() << " double\n";
    out.precision(17);
    for (const auto& p : mesh.vertices)
        out << p.x << " " << p.y << " 0\n";
    out << "CELLS " << mesh.triangles.size() << " " << 4 * mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles)
        out << "3 " << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
    out << "CELL_TYPES " << mesh.triangles.size() << "\n";
    for (size_t i = 0; i < mesh.triangles.size(); ++i)
        out << "5\n"; // VTK_TRIANGLE
    if (fields.empty())
        return;
    out << "POINT_DATA " << mesh.vertices.size() << "\n";
    for (const auto& [name, values] : fields) {
        out << "SCALARS " << name << " double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (size_t v = 0; v < mesh.vertices.size(); ++v) {
            const int i = dofmap.node_to_free[v];
            out << (i >= 0 ? values[i] : 0.0) << "\n";
        }
    }
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        const std::string& c = cells[i];
        const bool quote = c.find_first_of(",\"\r\n") != std::string::npos;
        if (i)
            out << ',';
        if (quote) {
            out << '"';
            for (char ch : c) {
                if (ch == '"')
                    out << '"';
                out << ch;
            }
            out << '"';
        } else {
            out << c;
        }
    }
    out << "\r\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    out << content;
}

} // namespace dynbc
