#include "dynbc/balance.hpp"

#include <map>
#include <stdexcept>

namespace dynbc {

namespace {

std::pair<int, int> sorted_edge(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

ControlVolume make_control_volume(const Mesh& mesh, std::vector<int> triangles) {
    ControlVolume cv;
    cv.in_volume.assign(mesh.triangles.size(), 0);
    for (int t : triangles) {
        if (t < 0 || t >= static_cast<int>(mesh.triangles.size()))
            throw std::invalid_argument("make_control_volume: triangle index out of range");
        cv.in_volume[t] = 1;
    }
    cv.triangles = std::move(triangles);

    std::map<std::pair<int, int>, std::vector<int>> incidence;
    std::vector<std::vector<int>> vertex_tris(mesh.vertices.size());
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& v = mesh.triangles[t].v;
        for (int k = 0; k < 3; ++k) {
            incidence[sorted_edge(v[k], v[(k + 1) % 3])].push_back(static_cast<int>(t));
            vertex_tris[v[k]].push_back(static_cast<int>(t));
        }
    }

    // Dirichlet vertices are pinned, not governed by an equation row, so they
    // always sit on the control-volume boundary.
    std::vector<char> on_dirichlet(mesh.vertices.size(), 0);
    for (const auto& be : mesh.boundary_edges) {
        if (be.tag == BoundaryTag::dirichlet) {
            on_dirichlet[be.a] = 1;
            on_dirichlet[be.b] = 1;
        }
    }

    cv.is_interior.assign(mesh.vertices.size(), 0);
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
        if (vertex_tris[v].empty() || on_dirichlet[v])
            continue;
        bool all_inside = true;
        for (int t : vertex_tris[v])
            if (!cv.in_volume[t])
                all_inside = false;
        cv.is_interior[v] = all_inside;
        if (all_inside)
            cv.interior_nodes.push_back(static_cast<int>(v));
    }

    for (int t : cv.triangles) {
        const auto& v = mesh.triangles[t].v;
        for (int k = 0; k < 3; ++k) {
            const auto& tris = incidence.at(sorted_edge(v[k], v[(k + 1) % 3]));
            bool shared_inside = false;
            for (int other : tris)
                if (other != t && cv.in_volume[other])
                    shared_inside = true;
            if (!shared_inside)
                cv.boundary_facets.emplace_back(t, k);
        }
    }

    size_t ig = 0;
    for (const auto& be : mesh.boundary_edges) {
        if (be.tag != BoundaryTag::gamma)
            continue;
        const auto& tris = incidence.at(sorted_edge(be.a, be.b));
        if (tris.size() == 1 && cv.in_volume[tris[0]])
            cv.gamma_edges.push_back(static_cast<int>(ig));
        ++ig;
    }
    for (size_t e = 0; e < mesh.sigma_edges.size(); ++e) {
        const auto& tris = incidence.at(sorted_edge(mesh.sigma_edges[e].a, mesh.sigma_edges[e].b));
        if (tris.size() == 2 && cv.in_volume[tris[0]] && cv.in_volume[tris[1]])
            cv.sigma_edges.push_back(static_cast<int>(e));
    }
    return cv;
}

std::vector<double> global_balance_residual(const DiscreteOperator& op, const Trajectory& traj,
                                            const Loads& loads, MassKind mass) {
    const Mesh& mesh = *op.mesh;
    const DofMap& dofmap = *op.dofmap;
    for (const auto& be : mesh.boundary_edges)
        if (be.tag == BoundaryTag::dirichlet)
            throw std::invalid_argument("global_balance_residual: mesh has Dirichlet edges");
    if (op.B.nonZeros() > 0 && op.B.coeffs().cwiseAbs().maxCoeff() > 0.0)
        throw std::invalid_argument("global_balance_residual: b must vanish (bu is a sink term "
                                    "outside the pure balance law)");

    const SparseMat& M = op.mass(mass, MassWeight::eps);
    std::vector<double> residuals;
    for (int n = 1; n <= traj.grid.n_steps(); ++n) {
        const double tau = traj.grid.tau(n);
        const Eigen::VectorXd F = assemble_load(mesh, dofmap, loads.f_omega, loads.f_gamma,
                                                loads.f_sigma, traj.grid.t[n]);
        const double content_rate =
            ((M * traj.states[n]).sum() - (M * traj.states[n - 1]).sum()) / tau;
        residuals.push_back(content_rate - F.sum());
    }
    return residuals;
}

namespace {

struct StepAccumulator {
    double storage = 0.0;
    double volume_source = 0.0;
    double gamma_source = 0.0;
    double interface_source = 0.0;
    double surface_sink = 0.0;
    // residual contributions of non-interior nodes from inside elements
    double boundary_residual = 0.0;
    const std::vector<char>* flux_nodes = nullptr; // override selection for directed flux
    double selected_residual = 0.0;
};

// Accumulates the per-element contributions of one time step over a control
// volume. Nodal values at Dirichlet vertices are zero.
void accumulate_step(const Mesh& mesh, const DofMap& dofmap, const CoefficientField& coeffs,
                     const Trajectory& traj, const Loads& loads, const ControlVolume& cv,
                     int step, MassKind mass, StepAccumulator& acc) {
    if (step < 1 || step > traj.grid.n_steps())
        throw std::invalid_argument("balance: step out of range");
    const double t = traj.grid.t[step];
    const double tau = traj.grid.tau(step);

    auto value = [&](const Eigen::VectorXd& vec, int vtx) {
        const int i = dofmap.node_to_free[vtx];
        return i >= 0 ? vec[i] : 0.0;
    };
    auto u_at = [&](int vtx) { return value(traj.states[step], vtx); };
    auto udot_at = [&](int vtx) {
        return (value(traj.states[step], vtx) - value(traj.states[step - 1], vtx)) / tau;
    };
    auto take = [&](int vtx, double r) {
        if (!cv.is_interior[vtx])
            acc.boundary_residual += r;
        if (acc.flux_nodes && (*acc.flux_nodes)[vtx])
            acc.selected_residual += r;
    };

    const bool lumped = mass == MassKind::lumped;

    for (int tri_id : cv.triangles) {
        const auto& tri = mesh.triangles[tri_id];
        const double area = triangle_area(mesh, tri);
        const double eps = coeffs.eps.cell[tri_id];

        // element load, edge-midpoint rule
        double fm[3];
        for (int k = 0; k < 3; ++k) {
            const Vec2& pa = mesh.vertices[tri.v[k]];
            const Vec2& pb = mesh.vertices[tri.v[(k + 1) % 3]];
            fm[k] = loads.f_omega(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y), t);
        }
        // element stiffness gradients
        const Vec2& p0 = mesh.vertices[tri.v[0]];
        const Vec2& p1 = mesh.vertices[tri.v[1]];
        const Vec2& p2 = mesh.vertices[tri.v[2]];
        const double inv = 1.0 / (2.0 * area);
        const Eigen::Vector2d g[3] = {{(p1.y - p2.y) * inv, (p2.x - p1.x) * inv},
                                      {(p2.y - p0.y) * inv, (p0.x - p2.x) * inv},
                                      {(p0.y - p1.y) * inv, (p1.x - p0.x) * inv}};
        Eigen::Vector2d mu_grad_u = Eigen::Vector2d::Zero();
        for (int j = 0; j < 3; ++j)
            mu_grad_u += u_at(tri.v[j]) * (coeffs.mu[tri_id] * g[j]);

        for (int i = 0; i < 3; ++i) {
            double m_udot;
            if (lumped) {
                m_udot = eps * area / 3.0 * udot_at(tri.v[i]);
            } else {
                m_udot = 0.0;
                for (int j = 0; j < 3; ++j)
                    m_udot += eps * area / 12.0 * (i == j ? 2.0 : 1.0) * udot_at(tri.v[j]);
            }
            const double k_u = area * g[i].dot(mu_grad_u);
            const double f_i = area / 3.0 * 0.5 * (fm[i] + fm[(i + 2) % 3]);
            acc.storage += m_udot;
            acc.volume_source += f_i;
            take(tri.v[i], m_udot + k_u - f_i);
        }
    }

    struct EdgeRef { int a, b; double eps, b_coef; const ScalarField* f; bool is_sigma; };
    std::vector<EdgeRef> edges;
    {
        std::vector<int> gamma_lookup;
        size_t ig = 0;
        for (const auto& be : mesh.boundary_edges) {
            if (be.tag != BoundaryTag::gamma)
                continue;
            gamma_lookup.push_back(static_cast<int>(&be - mesh.boundary_edges.data()));
            ++ig;
        }
        for (int e : cv.gamma_edges) {
            const auto& be = mesh.boundary_edges[gamma_lookup[e]];
            edges.push_back({be.a, be.b, coeffs.eps.gamma_edge[e], coeffs.b_gamma[e],
                             &loads.f_gamma, false});
        }
    }
    for (int e : cv.sigma_edges) {
        const auto& se = mesh.sigma_edges[e];
        edges.push_back({se.a, se.b, coeffs.eps.sigma_edge[e], coeffs.b_sigma[e], &loads.f_sigma,
                        true});
    }
    for (const auto& er : edges) {
        const double len = edge_length(mesh, er.a, er.b);
        const Vec2& pa = mesh.vertices[er.a];
        const Vec2& pb = mesh.vertices[er.b];
        const double f_mid = (*er.f)(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y), t);
        const int vv[2] = {er.a, er.b};
        for (int i = 0; i < 2; ++i) {
            double m_udot, b_u;
            if (lumped) {
                m_udot = er.eps * len / 2.0 * udot_at(vv[i]);
            } else {
                m_udot = er.eps * len / 6.0 * (2.0 * udot_at(vv[i]) + udot_at(vv[1 - i]));
            }
            b_u = er.b_coef * len / 6.0 * (2.0 * u_at(vv[i]) + u_at(vv[1 - i]));
            const double f_i = 0.5 * len * f_mid;
            acc.storage += m_udot;
            acc.surface_sink += b_u;
            (er.is_sigma ? acc.interface_source : acc.gamma_source) += f_i;
            take(vv[i], m_udot + b_u - f_i);
        }
    }
}

} // namespace

std::vector<FluxReport> subdomain_flux_balance(const Mesh& mesh, const DofMap& dofmap,
                                               const CoefficientField& coeffs,
                                               const Trajectory& traj, const Loads& loads,
                                               const ControlVolume& cv, MassKind mass) {
    std::vector<FluxReport> reports;
    for (int n = 1; n <= traj.grid.n_steps(); ++n) {
        StepAccumulator acc;
        accumulate_step(mesh, dofmap, coeffs, traj, loads, cv, n, mass, acc);
        FluxReport rep;
        rep.t = traj.grid.t[n];
        rep.storage = acc.storage;
        rep.boundary_flux = -acc.boundary_residual;
        rep.volume_source = acc.volume_source;
        rep.gamma_source = acc.gamma_source;
        rep.interface_source = acc.interface_source;
        rep.residual = acc.storage + rep.boundary_flux + acc.surface_sink -
                       (acc.volume_source + acc.gamma_source + acc.interface_source);
        reports.push_back(rep);
    }
    return reports;
}

double directed_flux(const Mesh& mesh, const DofMap& dofmap, const CoefficientField& coeffs,
                     const Trajectory& traj, const Loads& loads, const ControlVolume& cv,
                     std::span<const int> nodes, int step, MassKind mass) {
    std::vector<char> mask(mesh.vertices.size(), 0);
    for (int v : nodes)
        mask[v] = 1;
    StepAccumulator acc;
    acc.flux_nodes = &mask;
    accumulate_step(mesh, dofmap, coeffs, traj, loads, cv, step, mass, acc);
    return -acc.selected_residual;
}

} // namespace dynbc
