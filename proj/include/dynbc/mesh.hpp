#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dynbc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

enum class BoundaryTag { dirichlet, gamma };

struct BoundaryEdge {
    int a = -1;
    int b = -1;
    BoundaryTag tag = BoundaryTag::dirichlet;
};

// Oriented interior interface edge. The normal nu_sigma points from the
// side-1 triangle into the other incident triangle.
struct SigmaEdge {
    int a = -1;
    int b = -1;
    int side1_triangle = -1;
};

struct Triangle {
    std::array<int, 3> v{-1, -1, -1};
    int region = 0;
};

// Tagged 2-D simplicial mesh. Immutable after construction.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<Triangle> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<SigmaEdge> sigma_edges;
};

enum class FacetTag { dirichlet, gamma, sigma };

struct RectMeshSpec {
    int nx = 1;
    int ny = 1;
    // Interface line y = interface_y; must coincide with a horizontal grid
    // line. No interface when unset.
    std::optional<double> interface_y;
    // x-range of the interface; endpoints must sit on vertical grid lines.
    std::pair<double, double> interface_extent{0.0, 1.0};
    // Sides of the unit square tagged gamma; everything else is dirichlet.
    std::set<std::string> gamma_sides;
};

// Structured crossed-triangle mesh of the unit square (four triangles per
// cell around a center vertex; all triangles are non-obtuse).
Mesh generate_rect_mesh(const RectMeshSpec& spec);

// Unit disk with a slit along {(x,0) : 0 <= x <= 1}, realized by duplicating
// the vertex row on the slit. Slit edges are dirichlet on both sides, the
// outer circle is gamma, no sigma edges.
Mesh generate_slit_disk(int n_refine);

Mesh load_mesh(const std::string& text);
std::string save_mesh(const Mesh& mesh);

// Diagnostic check of all Mesh invariants; empty result iff valid.
std::vector<std::string> validate(const Mesh& mesh);

double facet_measure(const Mesh& mesh, FacetTag tag);

double triangle_area(const Mesh& mesh, const Triangle& tri);
double edge_length(const Mesh& mesh, int a, int b);

} // namespace dynbc
