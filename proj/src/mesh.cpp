#include "dynbc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dynbc {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) <= tol;
}

std::pair<int, int> sorted_edge(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

double triangle_area(const Mesh& mesh, const Triangle& tri) {
    const Vec2& p0 = mesh.vertices[tri.v[0]];
    const Vec2& p1 = mesh.vertices[tri.v[1]];
    const Vec2& p2 = mesh.vertices[tri.v[2]];
    return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

double edge_length(const Mesh& mesh, int a, int b) {
    const Vec2& pa = mesh.vertices[a];
    const Vec2& pb = mesh.vertices[b];
    return std::hypot(pb.x - pa.x, pb.y - pa.y);
}

Mesh generate_rect_mesh(const RectMeshSpec& spec) {
    if (spec.nx < 1 || spec.ny < 1)
        throw std::invalid_argument("generate_rect_mesh: nx, ny must be >= 1");

    const int nx = spec.nx;
    const int ny = spec.ny;

    int j_if = -1;
    int i_lo = 0;
    int i_hi = 0;
    if (spec.interface_y) {
        const double jy = *spec.interface_y * ny;
        if (!near_integer(jy))
            throw std::invalid_argument("generate_rect_mesh: interface_y does not lie on a grid line");
        j_if = static_cast<int>(std::round(jy));
        if (j_if <= 0 || j_if >= ny)
            throw std::invalid_argument("generate_rect_mesh: interface_y must be strictly interior");
        const double xlo = spec.interface_extent.first * nx;
        const double xhi = spec.interface_extent.second * nx;
        if (!near_integer(xlo) || !near_integer(xhi))
            throw std::invalid_argument("generate_rect_mesh: interface_extent endpoints not on grid lines");
        i_lo = static_cast<int>(std::round(xlo));
        i_hi = static_cast<int>(std::round(xhi));
        if (i_lo < 0 || i_hi > nx || i_lo >= i_hi)
            throw std::invalid_argument("generate_rect_mesh: bad interface_extent");
    }

    Mesh mesh;
    const int ncorner = (nx + 1) * (ny + 1);
    mesh.vertices.resize(ncorner + nx * ny);
    auto corner = [&](int i, int j) { return j * (nx + 1) + i; };
    auto center = [&](int i, int j) { return ncorner + j * nx + i; };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.vertices[corner(i, j)] = {double(i) / nx, double(j) / ny};
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            mesh.vertices[center(i, j)] = {(i + 0.5) / nx, (j + 0.5) / ny};

    mesh.triangles.reserve(4 * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int region = 0;
            if (spec.interface_y)
                region = ((j + 0.5) / ny < *spec.interface_y) ? 0 : 1;
            const int c = center(i, j);
            const int v00 = corner(i, j);
            const int v10 = corner(i + 1, j);
            const int v11 = corner(i + 1, j + 1);
            const int v01 = corner(i, j + 1);
            mesh.triangles.push_back({{v00, v10, c}, region});   // bottom
            mesh.triangles.push_back({{v10, v11, c}, region});   // right
            mesh.triangles.push_back({{v11, v01, c}, region});   // top
            mesh.triangles.push_back({{v01, v00, c}, region});   // left
        }
    }

    auto side_tag = [&](const char* side) {
        return spec.gamma_sides.count(side) ? BoundaryTag::gamma : BoundaryTag::dirichlet;
    };
    for (int i = 0; i < nx; ++i) {
        mesh.boundary_edges.push_back({corner(i, 0), corner(i + 1, 0), side_tag("bottom")});
        mesh.boundary_edges.push_back({corner(i, ny), corner(i + 1, ny), side_tag("top")});
    }
    for (int j = 0; j < ny; ++j) {
        mesh.boundary_edges.push_back({corner(0, j), corner(0, j + 1), side_tag("left")});
        mesh.boundary_edges.push_back({corner(nx, j), corner(nx, j + 1), side_tag("right")});
    }

    if (spec.interface_y) {
        for (int i = i_lo; i < i_hi; ++i) {
            // side 1 = top triangle of the cell below, so nu_sigma = +y
            const int tri_below = 4 * ((j_if - 1) * nx + i) + 2;
            mesh.sigma_edges.push_back({corner(i, j_if), corner(i + 1, j_if), tri_below});
        }
    }
    return mesh;
}

Mesh generate_slit_disk(int n_refine) {
    if (n_refine < 0)
        throw std::invalid_argument("generate_slit_disk: n_refine must be >= 0");

    const int na = 8 << n_refine;   // angular sectors
    const int nr = 2 << n_refine;   // radial rings

    Mesh mesh;
    // Vertex 0 is the center (the slit tip). Each ring carries na+1 nodes;
    // the nodes at angle 0 and 2*pi coincide spatially and realize the two
    // sides of the slit.
    mesh.vertices.push_back({0.0, 0.0});
    auto ring_node = [&](int k, int m) { return 1 + (k - 1) * (na + 1) + m; };
    for (int k = 1; k <= nr; ++k) {
        const double r = double(k) / nr;
        for (int m = 0; m <= na; ++m) {
            const double th = 2.0 * kPi * m / na;
            mesh.vertices.push_back({r * std::cos(th), r * std::sin(th)});
        }
    }

    for (int m = 0; m < na; ++m)
        mesh.triangles.push_back({{0, ring_node(1, m), ring_node(1, m + 1)}, 0});
    for (int k = 1; k < nr; ++k) {
        for (int m = 0; m < na; ++m) {
            const int a = ring_node(k, m);
            const int b = ring_node(k + 1, m);
            const int c = ring_node(k + 1, m + 1);
            const int d = ring_node(k, m + 1);
            mesh.triangles.push_back({{a, b, c}, 0});
            mesh.triangles.push_back({{a, c, d}, 0});
        }
    }

    for (int m = 0; m < na; ++m)
        mesh.boundary_edges.push_back({ring_node(nr, m), ring_node(nr, m + 1), BoundaryTag::gamma});
    // Both sides of the slit are Dirichlet.
    mesh.boundary_edges.push_back({0, ring_node(1, 0), BoundaryTag::dirichlet});
    mesh.boundary_edges.push_back({0, ring_node(1, na), BoundaryTag::dirichlet});
    for (int k = 1; k < nr; ++k) {
        mesh.boundary_edges.push_back({ring_node(k, 0), ring_node(k + 1, 0), BoundaryTag::dirichlet});
        mesh.boundary_edges.push_back({ring_node(k, na), ring_node(k + 1, na), BoundaryTag::dirichlet});
    }
    return mesh;
}

std::vector<std::string> validate(const Mesh& mesh) {
    std::vector<std::string> report;
    auto fail = [&](const std::string& msg) { report.push_back(msg); };

    const int nv = static_cast<int>(mesh.vertices.size());
    auto in_range = [&](int i) { return i >= 0 && i < nv; };

    for (size_t t = 0; t < mesh.triangles.size(); ++t)
        for (int i : mesh.triangles[t].v)
            if (!in_range(i)) {
                fail("triangle " + std::to_string(t) + ": vertex index out of range");
                return report;
            }
    for (size_t e = 0; e < mesh.boundary_edges.size(); ++e)
        if (!in_range(mesh.boundary_edges[e].a) || !in_range(mesh.boundary_edges[e].b)) {
            fail("boundary edge " + std::to_string(e) + ": vertex index out of range");
            return report;
        }
    for (size_t e = 0; e < mesh.sigma_edges.size(); ++e)
        if (!in_range(mesh.sigma_edges[e].a) || !in_range(mesh.sigma_edges[e].b)) {
            fail("sigma edge " + std::to_string(e) + ": vertex index out of range");
            return report;
        }

    for (size_t t = 0; t < mesh.triangles.size(); ++t)
        if (triangle_area(mesh, mesh.triangles[t]) <= 0.0)
            fail("triangle " + std::to_string(t) + " is not positively oriented");

    // Edge -> incident triangle list.
    std::map<std::pair<int, int>, std::vector<int>> incidence;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& v = mesh.triangles[t].v;
        for (int k = 0; k < 3; ++k)
            incidence[sorted_edge(v[k], v[(k + 1) % 3])].push_back(static_cast<int>(t));
    }

    std::set<std::pair<int, int>> tagged;
    for (size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
        const auto key = sorted_edge(mesh.boundary_edges[e].a, mesh.boundary_edges[e].b);
        auto it = incidence.find(key);
        const size_t n = (it == incidence.end()) ? 0 : it->second.size();
        if (n != 1)
            fail("boundary edge " + std::to_string(e) + " has " + std::to_string(n) +
                 " incident triangles (expected 1)");
        if (!tagged.insert(key).second)
            fail("boundary edge " + std::to_string(e) + " is tagged twice");
    }
    for (size_t e = 0; e < mesh.sigma_edges.size(); ++e) {
        const auto& se = mesh.sigma_edges[e];
        const auto key = sorted_edge(se.a, se.b);
        auto it = incidence.find(key);
        const size_t n = (it == incidence.end()) ? 0 : it->second.size();
        if (n != 2) {
            fail("sigma edge " + std::to_string(e) + " not interior (" + std::to_string(n) +
                 " incident triangles)");
            continue;
        }
        if (se.side1_triangle != it->second[0] && se.side1_triangle != it->second[1])
            fail("sigma edge " + std::to_string(e) + ": side-1 triangle is not incident");
        if (tagged.count(key))
            fail("sigma edge " + std::to_string(e) + " coincides with a boundary edge");
    }

    // Every mesh edge with a single incident triangle must carry a boundary tag.
    for (const auto& [key, tris] : incidence) {
        if (tris.size() == 1 && !tagged.count(key))
            fail("untagged boundary edge (" + std::to_string(key.first) + "," +
                 std::to_string(key.second) + ")");
        if (tris.size() > 2)
            fail("non-manifold edge (" + std::to_string(key.first) + "," +
                 std::to_string(key.second) + ")");
    }

    // Duplicate vertices. Coincident pairs are admitted only when both copies
    // lie on Dirichlet edges (slit meshes double the crack row).
    std::vector<char> on_dirichlet(nv, 0);
    for (const auto& be : mesh.boundary_edges)
        if (be.tag == BoundaryTag::dirichlet)
            on_dirichlet[be.a] = on_dirichlet[be.b] = 1;
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    if (nv > 0) {
        xmin = xmax = mesh.vertices[0].x;
        ymin = ymax = mesh.vertices[0].y;
        for (const auto& p : mesh.vertices) {
            xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
        }
    }
    const double scale = std::max(1e-300, std::hypot(xmax - xmin, ymax - ymin));
    std::map<std::pair<long long, long long>, std::vector<int>> buckets;
    const double cell = 1e-12 * scale;
    for (int i = 0; i < nv; ++i) {
        const auto& p = mesh.vertices[i];
        buckets[{static_cast<long long>(std::floor(p.x / cell / 4)),
                 static_cast<long long>(std::floor(p.y / cell / 4))}].push_back(i);
    }
    for (const auto& [cellkey, ids] : buckets) {
        (void)cellkey;
        for (size_t i = 0; i < ids.size(); ++i)
            for (size_t j = i + 1; j < ids.size(); ++j) {
                const auto& p = mesh.vertices[ids[i]];
                const auto& q = mesh.vertices[ids[j]];
                if (std::hypot(p.x - q.x, p.y - q.y) <= 1e-12 * scale &&
                    !(on_dirichlet[ids[i]] && on_dirichlet[ids[j]]))
                    fail("duplicate vertices " + std::to_string(ids[i]) + " and " +
                         std::to_string(ids[j]));
            }
    }
    return report;
}

double facet_measure(const Mesh& mesh, FacetTag tag) {
    double total = 0.0;
    if (tag == FacetTag::sigma) {
        for (const auto& se : mesh.sigma_edges)
            total += edge_length(mesh, se.a, se.b);
    } else {
        const BoundaryTag want = (tag == FacetTag::gamma) ? BoundaryTag::gamma : BoundaryTag::dirichlet;
        for (const auto& be : mesh.boundary_edges)
            if (be.tag == want)
                total += edge_length(mesh, be.a, be.b);
    }
    return total;
}

namespace {

struct LineReader {
    std::istringstream in;
    int lineno = 0;
    explicit LineReader(const std::string& text) : in(text) {}

    // Next non-empty line with comments stripped; empty optional at EOF.
    std::optional<std::vector<std::string>> next_tokens() {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            std::vector<std::string> toks;
            std::string t;
            while (ls >> t)
                toks.push_back(t);
            if (!toks.empty())
                return toks;
        }
        return std::nullopt;
    }

    [[noreturn]] void error(const std::string& msg) const {
        throw std::runtime_error("mesh parse error at line " + std::to_string(lineno) + ": " + msg);
    }
};

int parse_int(LineReader& r, const std::string& s) {
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size())
            r.error("bad integer '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        r.error("bad integer '" + s + "'");
    }
}

double parse_double(LineReader& r, const std::string& s) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            r.error("bad number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        r.error("bad number '" + s + "'");
    }
}

} // namespace

Mesh load_mesh(const std::string& text) {
    LineReader r(text);
    auto header = r.next_tokens();
    if (!header || header->size() != 2 || (*header)[0] != "dynbc-mesh" || (*header)[1] != "1")
        r.error("expected header 'dynbc-mesh 1'");

    Mesh mesh;
    auto expect_section = [&](const char* name) -> int {
        auto toks = r.next_tokens();
        if (!toks || toks->size() != 2 || (*toks)[0] != name)
            r.error(std::string("expected section '") + name + " N'");
        const int n = parse_int(r, (*toks)[1]);
        if (n < 0)
            r.error("negative count");
        return n;
    };
    auto row = [&](size_t want) -> std::vector<std::string> {
        auto toks = r.next_tokens();
        if (!toks || toks->size() != want)
            r.error("expected " + std::to_string(want) + " fields");
        return *toks;
    };

    const int nv = expect_section("vertices");
    mesh.vertices.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        auto t = row(2);
        mesh.vertices.push_back({parse_double(r, t[0]), parse_double(r, t[1])});
    }
    const int nt = expect_section("triangles");
    mesh.triangles.reserve(nt);
    for (int i = 0; i < nt; ++i) {
        auto t = row(4);
        mesh.triangles.push_back({{parse_int(r, t[0]), parse_int(r, t[1]), parse_int(r, t[2])},
                                  parse_int(r, t[3])});
    }
    const int nb = expect_section("boundary_edges");
    mesh.boundary_edges.reserve(nb);
    for (int i = 0; i < nb; ++i) {
        auto t = row(3);
        BoundaryTag tag;
        if (t[2] == "dirichlet")
            tag = BoundaryTag::dirichlet;
        else if (t[2] == "gamma")
            tag = BoundaryTag::gamma;
        else
            r.error("unknown boundary tag '" + t[2] + "'");
        mesh.boundary_edges.push_back({parse_int(r, t[0]), parse_int(r, t[1]), tag});
    }
    const int ns = expect_section("sigma_edges");
    mesh.sigma_edges.reserve(ns);
    for (int i = 0; i < ns; ++i) {
        auto t = row(3);
        mesh.sigma_edges.push_back({parse_int(r, t[0]), parse_int(r, t[1]), parse_int(r, t[2])});
    }
    if (r.next_tokens())
        r.error("trailing content after sigma_edges section");

    const auto report = validate(mesh);
    if (!report.empty())
        throw std::runtime_error("loaded mesh is invalid: " + report.front());
    return mesh;
}

std::string save_mesh(const Mesh& mesh) {
    std::ostringstream out;
    out.precision(17);
    out << "dynbc-mesh 1\n";
    out << "vertices " << mesh.vertices.size() << "\n";
    for (const auto& p : mesh.vertices)
        out << p.x << " " << p.y << "\n";
    out << "triangles " << mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles)
        out << t.v[0] << " " << t.v[1] << " " << t.v[2] << " " << t.region << "\n";
    out << "boundary_edges " << mesh.boundary_edges.size() << "\n";
    for (const auto& e : mesh.boundary_edges)
        out << e.a << " " << e.b << " "
            << (e.tag == BoundaryTag::dirichlet ? "dirichlet" : "gamma") << "\n";
    out << "sigma_edges " << mesh.sigma_edges.size() << "\n";
    for (const auto& e : mesh.sigma_edges)
        out << e.a << " " << e.b << " " << e.side1_triangle << "\n";
    return out.str();
}

} // namespace dynbc
