#include "dynbc/state_space.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynbc {

DofMap build_dofmap(const Mesh& mesh) {
    const int nv = static_cast<int>(mesh.vertices.size());
    std::vector<char> dirichlet(nv, 0);
    for (const auto& be : mesh.boundary_edges)
        if (be.tag == BoundaryTag::dirichlet)
            dirichlet[be.a] = dirichlet[be.b] = 1;

    DofMap dm;
    dm.node_to_free.assign(nv, -1);
    dm.volume_weight.assign(nv, 0.0);
    dm.surface_weight.assign(nv, 0.0);
    for (int i = 0; i < nv; ++i) {
        if (dirichlet[i]) {
            dm.dirichlet_nodes.push_back(i);
        } else {
            dm.node_to_free[i] = static_cast<int>(dm.free_nodes.size());
            dm.free_nodes.push_back(i);
        }
    }
    for (const auto& tri : mesh.triangles) {
        const double third = triangle_area(mesh, tri) / 3.0;
        for (int v : tri.v)
            dm.volume_weight[v] += third;
    }
    for (const auto& be : mesh.boundary_edges) {
        if (be.tag != BoundaryTag::gamma)
            continue;
        const double half = 0.5 * edge_length(mesh, be.a, be.b);
        dm.surface_weight[be.a] += half;
        dm.surface_weight[be.b] += half;
    }
    for (const auto& se : mesh.sigma_edges) {
        const double half = 0.5 * edge_length(mesh, se.a, se.b);
        dm.surface_weight[se.a] += half;
        dm.surface_weight[se.b] += half;
    }
    return dm;
}

MeasureWeight MeasureWeight::unit(const Mesh& mesh) {
    return constant(mesh, 1.0);
}

MeasureWeight MeasureWeight::constant(const Mesh& mesh, double value) {
    MeasureWeight w;
    w.cell.assign(mesh.triangles.size(), value);
    size_t n_gamma = 0;
    for (const auto& be : mesh.boundary_edges)
        if (be.tag == BoundaryTag::gamma)
            ++n_gamma;
    w.gamma_edge.assign(n_gamma, value);
    w.sigma_edge.assign(mesh.sigma_edges.size(), value);
    return w;
}

namespace {

void check_weight(const Mesh& mesh, const MeasureWeight& w) {
    size_t n_gamma = 0;
    for (const auto& be : mesh.boundary_edges)
        if (be.tag == BoundaryTag::gamma)
            ++n_gamma;
    if (w.cell.size() != mesh.triangles.size() || w.gamma_edge.size() != n_gamma ||
        w.sigma_edge.size() != mesh.sigma_edges.size())
        throw std::invalid_argument("measure weight size mismatch");
    for (double v : w.cell)
        if (!(v > 0.0))
            throw std::invalid_argument("nonpositive cell weight");
    for (double v : w.gamma_edge)
        if (!(v > 0.0))
            throw std::invalid_argument("nonpositive gamma edge weight");
    for (double v : w.sigma_edge)
        if (!(v > 0.0))
            throw std::invalid_argument("nonpositive sigma edge weight");
}

} // namespace

SparseMat assemble_mass(const Mesh& mesh, const DofMap& dofmap, const MeasureWeight& w,
                        bool lumped) {
    check_weight(mesh, w);
    const int n = dofmap.n_free();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(12 * mesh.triangles.size());

    auto add = [&](int vi, int vj, double val) {
        const int i = dofmap.node_to_free[vi];
        const int j = dofmap.node_to_free[vj];
        if (i < 0 || j < 0)
            return;
        if (lumped)
            trips.emplace_back(i, i, val);
        else
            trips.emplace_back(i, j, val);
    };

    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double s = w.cell[t] * triangle_area(mesh, tri) / 12.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                add(tri.v[i], tri.v[j], (i == j ? 2.0 : 1.0) * s);
    }
    size_t ig = 0;
    for (const auto& be : mesh.boundary_edges) {
        if (be.tag != BoundaryTag::gamma)
            continue;
        const double s = w.gamma_edge[ig++] * edge_length(mesh, be.a, be.b) / 6.0;
        add(be.a, be.a, 2.0 * s);
        add(be.b, be.b, 2.0 * s);
        add(be.a, be.b, s);
        add(be.b, be.a, s);
    }
    for (size_t e = 0; e < mesh.sigma_edges.size(); ++e) {
        const auto& se = mesh.sigma_edges[e];
        const double s = w.sigma_edge[e] * edge_length(mesh, se.a, se.b) / 6.0;
        add(se.a, se.a, 2.0 * s);
        add(se.b, se.b, 2.0 * s);
        add(se.a, se.b, s);
        add(se.b, se.a, s);
    }

    SparseMat M(n, n);
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

Eigen::VectorXd nodal_weight(const Mesh& mesh, const DofMap& dofmap, const MeasureWeight& w) {
    const SparseMat Mw = assemble_mass(mesh, dofmap, w, true);
    const SparseMat M1 = assemble_mass(mesh, dofmap, MeasureWeight::unit(mesh), true);
    Eigen::VectorXd out(dofmap.n_free());
    for (int i = 0; i < dofmap.n_free(); ++i)
        out[i] = Mw.coeff(i, i) / M1.coeff(i, i);
    return out;
}

double lp_norm(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u, double p,
               const Eigen::VectorXd& varsigma) {
    if (p < 1.0)
        throw std::invalid_argument("lp_norm: p must be >= 1");
    if (u.size() != dofmap.n_free())
        throw std::invalid_argument("lp_norm: state dimension mismatch");
    const bool weighted = varsigma.size() > 0;
    if (weighted && varsigma.size() != u.size())
        throw std::invalid_argument("lp_norm: weight dimension mismatch");

    if (std::isinf(p))
        return u.size() == 0 ? 0.0 : u.cwiseAbs().maxCoeff();

    double total = 0.0;
    for (int i = 0; i < dofmap.n_free(); ++i) {
        const int v = dofmap.free_nodes[i];
        const double m = dofmap.volume_weight[v] + dofmap.surface_weight[v];
        const double scale = weighted ? 1.0 / varsigma[i] : 1.0;
        total += m * scale * std::pow(std::abs(u[i]), p);
    }
    return std::pow(total, 1.0 / p);
}

StateFunction interp(const ScalarField& f, const Mesh& mesh, const DofMap& dofmap, double t) {
    StateFunction u;
    u.dofmap = &dofmap;
    u.values.resize(dofmap.n_free());
    for (int i = 0; i < dofmap.n_free(); ++i) {
        const auto& p = mesh.vertices[dofmap.free_nodes[i]];
        const double v = f(p.x, p.y, t);
        if (!std::isfinite(v))
            throw std::invalid_argument("interp: non-finite sample at free node " +
                                        std::to_string(i));
        u.values[i] = v;
    }
    return u;
}

} // namespace dynbc
