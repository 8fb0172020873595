#include "dynbc/assembly.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dynbc {

CoefficientField CoefficientField::isotropic(const Mesh& mesh, double mu_value, double eps_value,
                                             double b_value) {
    CoefficientField c;
    c.mu.assign(mesh.triangles.size(), mu_value * Eigen::Matrix2d::Identity());
    c.mu_lower = mu_value;
    c.mu_upper = mu_value;
    c.eps = MeasureWeight::constant(mesh, eps_value);
    c.eps_lower = eps_value;
    c.b_gamma.assign(c.eps.gamma_edge.size(), b_value);
    c.b_sigma.assign(c.eps.sigma_edge.size(), b_value);
    return c;
}

CoefficientField CoefficientField::by_region(const Mesh& mesh,
                                             const std::vector<double>& mu_by_region,
                                             double eps_value, double b_value) {
    if (mu_by_region.empty())
        throw std::invalid_argument("by_region: need at least one mu value");
    CoefficientField c = isotropic(mesh, mu_by_region[0], eps_value, b_value);
    double lo = mu_by_region[0], hi = mu_by_region[0];
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const int r = mesh.triangles[t].region;
        if (r < 0 || r >= static_cast<int>(mu_by_region.size()))
            throw std::invalid_argument("by_region: triangle region " + std::to_string(r) +
                                        " has no mu value");
        c.mu[t] = mu_by_region[r] * Eigen::Matrix2d::Identity();
        lo = std::min(lo, mu_by_region[r]);
        hi = std::max(hi, mu_by_region[r]);
    }
    c.mu_lower = lo;
    c.mu_upper = hi;
    return c;
}

std::vector<std::string> check_coefficients(const Mesh& mesh, const CoefficientField& c,
                                            unsigned seed) {
    std::vector<std::string> report;
    if (c.mu.size() != mesh.triangles.size())
        report.push_back("mu size mismatch");

    // Probe directions: canonical basis plus 16 seeded random unit vectors.
    std::vector<Eigen::Vector2d> probes = {{1, 0}, {0, 1}};
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 16; ++k) {
        Eigen::Vector2d v(gauss(rng), gauss(rng));
        if (v.norm() > 1e-8)
            probes.push_back(v.normalized());
    }
    for (size_t t = 0; t < c.mu.size() && t < mesh.triangles.size(); ++t) {
        const auto& m = c.mu[t];
        for (const auto& xi : probes)
            if (xi.dot(m * xi) < c.mu_lower * xi.squaredNorm() - 1e-12)
                report.push_back("cell " + std::to_string(t) + ": ellipticity below mu_lower");
        if (m.operatorNorm() > c.mu_upper + 1e-12)
            report.push_back("cell " + std::to_string(t) + ": norm above mu_upper");
    }
    auto check_eps = [&](const std::vector<double>& vals, const char* what) {
        for (size_t i = 0; i < vals.size(); ++i)
            if (!(vals[i] >= c.eps_lower) || !(vals[i] > 0.0))
                report.push_back(std::string(what) + " " + std::to_string(i) +
                                 ": eps below lower bound");
    };
    check_eps(c.eps.cell, "cell");
    check_eps(c.eps.gamma_edge, "gamma edge");
    check_eps(c.eps.sigma_edge, "sigma edge");
    return report;
}

namespace {

// Constant gradients of the three P1 hats on a triangle.
void hat_gradients(const Mesh& mesh, const Triangle& tri, Eigen::Vector2d g[3], double& area) {
    const Vec2& p0 = mesh.vertices[tri.v[0]];
    const Vec2& p1 = mesh.vertices[tri.v[1]];
    const Vec2& p2 = mesh.vertices[tri.v[2]];
    area = triangle_area(mesh, tri);
    const double inv = 1.0 / (2.0 * area);
    g[0] = {(p1.y - p2.y) * inv, (p2.x - p1.x) * inv};
    g[1] = {(p2.y - p0.y) * inv, (p0.x - p2.x) * inv};
    g[2] = {(p0.y - p1.y) * inv, (p1.x - p0.x) * inv};
}

} // namespace

SparseMat assemble_stiffness(const Mesh& mesh, const DofMap& dofmap,
                             const std::vector<Eigen::Matrix2d>& mu) {
    if (mu.size() != mesh.triangles.size())
        throw std::invalid_argument("assemble_stiffness: mu size mismatch");
    const int n = dofmap.n_free();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(9 * mesh.triangles.size());
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        Eigen::Vector2d g[3];
        double area;
        hat_gradients(mesh, tri, g, area);
        for (int i = 0; i < 3; ++i) {
            const int gi = dofmap.node_to_free[tri.v[i]];
            if (gi < 0)
                continue;
            for (int j = 0; j < 3; ++j) {
                const int gj = dofmap.node_to_free[tri.v[j]];
                if (gj < 0)
                    continue;
                trips.emplace_back(gi, gj, area * g[i].dot(mu[t] * g[j]));
            }
        }
    }
    SparseMat K(n, n);
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
}

SparseMat assemble_b_operator(const Mesh& mesh, const DofMap& dofmap,
                              const std::vector<double>& b_gamma,
                              const std::vector<double>& b_sigma) {
    const int n = dofmap.n_free();
    std::vector<Eigen::Triplet<double>> trips;
    // lumped (half the edge mass per endpoint): keeps K + B + lambda M an
    // M-matrix for b >= 0, which the maximum-principle steps rely on
    auto add_edge = [&](int a, int b, double bval, double len) {
        const double s = bval * len / 2.0;
        const int ia = dofmap.node_to_free[a];
        const int ib = dofmap.node_to_free[b];
        if (ia >= 0)
            trips.emplace_back(ia, ia, s);
        if (ib >= 0)
            trips.emplace_back(ib, ib, s);
    };
    size_t ig = 0;
    for (const auto& be : mesh.boundary_edges) {
        if (be.tag != BoundaryTag::gamma)
            continue;
        if (ig >= b_gamma.size())
            throw std::invalid_argument("assemble_b_operator: b_gamma size mismatch");
        add_edge(be.a, be.b, b_gamma[ig++], edge_length(mesh, be.a, be.b));
    }
    if (ig != b_gamma.size())
        throw std::invalid_argument("assemble_b_operator: b_gamma size mismatch");
    if (b_sigma.size() != mesh.sigma_edges.size())
        throw std::invalid_argument("assemble_b_operator: b_sigma size mismatch");
    for (size_t e = 0; e < mesh.sigma_edges.size(); ++e) {
        const auto& se = mesh.sigma_edges[e];
        add_edge(se.a, se.b, b_sigma[e], edge_length(mesh, se.a, se.b));
    }
    SparseMat B(n, n);
    B.setFromTriplets(trips.begin(), trips.end());
    return B;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofmap, const ScalarField& f_omega,
                              const ScalarField& f_gamma, const ScalarField& f_sigma, double t) {
    Eigen::VectorXd F = Eigen::VectorXd::Zero(dofmap.n_free());
    auto accumulate = [&](int vtx, double val) {
        if (!std::isfinite(val))
            throw std::invalid_argument("assemble_load: non-finite field value");
        const int i = dofmap.node_to_free[vtx];
        if (i >= 0)
            F[i] += val;
    };

    // Edge-midpoint rule on triangles (exact for quadratics). The hat of
    // vertex i takes value 1/2 at the two midpoints adjacent to i.
    for (const auto& tri : mesh.triangles) {
        const double w = triangle_area(mesh, tri) / 3.0;
        double fm[3];
        for (int k = 0; k < 3; ++k) {
            const Vec2& pa = mesh.vertices[tri.v[k]];
            const Vec2& pb = mesh.vertices[tri.v[(k + 1) % 3]];
            fm[k] = f_omega(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y), t);
        }
        for (int i = 0; i < 3; ++i) {
            // midpoints of edges (i,i+1) and (i+2,i) touch vertex i
            accumulate(tri.v[i], w * 0.5 * (fm[i] + fm[(i + 2) % 3]));
        }
    }
    auto edge_load = [&](int a, int b, const ScalarField& f) {
        const Vec2& pa = mesh.vertices[a];
        const Vec2& pb = mesh.vertices[b];
        const double len = edge_length(mesh, a, b);
        const double fm = f(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y), t);
        accumulate(a, 0.5 * len * fm);
        accumulate(b, 0.5 * len * fm);
    };
    for (const auto& be : mesh.boundary_edges)
        if (be.tag == BoundaryTag::gamma)
            edge_load(be.a, be.b, f_gamma);
    for (const auto& se : mesh.sigma_edges)
        edge_load(se.a, se.b, f_sigma);
    return F;
}

EllipticityReport ellipticity_report(const SparseMat& K, const Mesh& mesh, const DofMap& dofmap,
                                     double mu_lower, int n_samples, unsigned seed) {
    const int n = dofmap.n_free();
    // W^{1,2} norm matrix: unit-coefficient stiffness plus the volume mass.
    std::vector<Eigen::Matrix2d> unit_mu(mesh.triangles.size(), Eigen::Matrix2d::Identity());
    const SparseMat KI = assemble_stiffness(mesh, dofmap, unit_mu);
    std::vector<Eigen::Triplet<double>> trips;
    for (const auto& tri : mesh.triangles) {
        const double s = triangle_area(mesh, tri) / 12.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const int gi = dofmap.node_to_free[tri.v[i]];
                const int gj = dofmap.node_to_free[tri.v[j]];
                if (gi >= 0 && gj >= 0)
                    trips.emplace_back(gi, gj, (i == j ? 2.0 : 1.0) * s);
            }
    }
    SparseMat Mvol(n, n);
    Mvol.setFromTriplets(trips.begin(), trips.end());
    const SparseMat Mfull = assemble_mass(mesh, dofmap, MeasureWeight::unit(mesh), false);

    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    EllipticityReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_samples; ++s) {
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i)
            u[i] = gauss(rng);
        const double denom = u.dot(KI * u) + u.dot(Mvol * u);
        if (denom <= 1e-14)
            continue;
        const double numer = u.dot(K * u) + u.dot(Mfull * u);
        rep.min_ratio = std::min(rep.min_ratio, numer / denom);
    }
    rep.satisfied = rep.min_ratio >= std::min(mu_lower, 1.0) - 1e-10;
    return rep;
}

} // namespace dynbc
