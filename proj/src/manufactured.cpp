#include "dynbc/manufactured.hpp"

#include <cmath>

namespace dynbc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ManufacturedProblem manufactured_smooth() {
    ManufacturedProblem p;
    p.name = "smooth";
    p.base_cells = 8;
    p.base_steps = 8;
    p.T = 0.1;
    p.make_mesh = [&, base = p.base_cells](int level) {
        RectMeshSpec spec;
        spec.nx = spec.ny = base << level;
        return generate_rect_mesh(spec); // all Dirichlet
    };
    p.make_coeffs = [](const Mesh& mesh) { return CoefficientField::isotropic(mesh, 1.0); };
    p.exact = [](double x, double y, double t) {
        return std::exp(-t) * std::sin(kPi * x) * std::sin(kPi * y);
    };
    p.exact_grad = [](double x, double y, double t) {
        const double e = std::exp(-t);
        return Eigen::Vector2d(e * kPi * std::cos(kPi * x) * std::sin(kPi * y),
                               e * kPi * std::sin(kPi * x) * std::cos(kPi * y));
    };
    // f = u_t - div(grad u) = (2 pi^2 - 1) u
    p.loads = Loads::zero();
    p.loads.f_omega = [exact = p.exact](double x, double y, double t) {
        return (2.0 * kPi * kPi - 1.0) * exact(x, y, t);
    };
    return p;
}

ManufacturedProblem manufactured_jump() {
    ManufacturedProblem p;
    p.name = "jump";
    p.base_cells = 8;
    p.base_steps = 8;
    p.T = 0.1;
    p.make_mesh = [base = p.base_cells](int level) {
        RectMeshSpec spec;
        spec.nx = spec.ny = base << level;
        spec.interface_y = 0.5;
        spec.interface_extent = {0.0, 1.0};
        return generate_rect_mesh(spec); // outer boundary Dirichlet
    };
    const double mu_below = 1.0;
    const double mu_above = 10.0;
    p.make_coeffs = [mu_below, mu_above](const Mesh& mesh) {
        return CoefficientField::by_region(mesh, {mu_below, mu_above});
    };
    // u = e^{-t} sin(pi x) g(y) with g = sin(2 pi y) below the interface and
    // g = sin(2 pi (1-y)) above; g vanishes on the interface, so f_Omega is
    // continuous, while the conormal derivative jumps.
    auto g = [](double y) {
        return y <= 0.5 ? std::sin(2.0 * kPi * y) : std::sin(2.0 * kPi * (1.0 - y));
    };
    auto dg = [](double y) {
        return y <= 0.5 ? 2.0 * kPi * std::cos(2.0 * kPi * y)
                        : -2.0 * kPi * std::cos(2.0 * kPi * (1.0 - y));
    };
    p.exact = [g](double x, double y, double t) {
        return std::exp(-t) * std::sin(kPi * x) * g(y);
    };
    p.exact_grad = [g, dg](double x, double y, double t) {
        const double e = std::exp(-t);
        return Eigen::Vector2d(e * kPi * std::cos(kPi * x) * g(y),
                               e * std::sin(kPi * x) * dg(y));
    };
    p.loads = Loads::zero();
    // f = u_t - mu Delta u = e^{-t} sin(pi x) g(y) (5 mu pi^2 - 1)
    p.loads.f_omega = [g, mu_below, mu_above](double x, double y, double t) {
        const double mu = y < 0.5 ? mu_below : mu_above;
        return std::exp(-t) * std::sin(kPi * x) * g(y) * (5.0 * mu * kPi * kPi - 1.0);
    };
    // trace of u on Sigma vanishes, so f_Sigma is the pure conormal jump
    // nu.(mu- grad u- - mu+ grad u+) = (mu- g'(1/2-) - mu+ g'(1/2+)) e^{-t} sin(pi x)
    const double jump = mu_below * (-2.0 * kPi) - mu_above * (2.0 * kPi);
    p.loads.f_sigma = [jump](double x, double, double t) {
        return jump * std::exp(-t) * std::sin(kPi * x);
    };
    return p;
}

double l2_error(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u,
                const ScalarField& exact, double t) {
    auto nodal = [&](int vtx) {
        const int i = dofmap.node_to_free[vtx];
        return i >= 0 ? u[i] : 0.0;
    };
    double total = 0.0;
    for (const auto& tri : mesh.triangles) {
        const double w = triangle_area(mesh, tri) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const Vec2& pa = mesh.vertices[tri.v[k]];
            const Vec2& pb = mesh.vertices[tri.v[(k + 1) % 3]];
            const double uh = 0.5 * (nodal(tri.v[k]) + nodal(tri.v[(k + 1) % 3]));
            const double diff = uh - exact(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y), t);
            total += w * diff * diff;
        }
    }
    return std::sqrt(total);
}

double h1_seminorm_error(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u,
                         const std::function<Eigen::Vector2d(double, double, double)>& exact_grad,
                         double t) {
    auto nodal = [&](int vtx) {
        const int i = dofmap.node_to_free[vtx];
        return i >= 0 ? u[i] : 0.0;
    };
    double total = 0.0;
    for (const auto& tri : mesh.triangles) {
        const Vec2& p0 = mesh.vertices[tri.v[0]];
        const Vec2& p1 = mesh.vertices[tri.v[1]];
        const Vec2& p2 = mesh.vertices[tri.v[2]];
        const double area = triangle_area(mesh, tri);
        const double inv = 1.0 / (2.0 * area);
        const Eigen::Vector2d g[3] = {{(p1.y - p2.y) * inv, (p2.x - p1.x) * inv},
                                      {(p2.y - p0.y) * inv, (p0.x - p2.x) * inv},
                                      {(p0.y - p1.y) * inv, (p1.x - p0.x) * inv}};
        Eigen::Vector2d grad_h = Eigen::Vector2d::Zero();
        for (int k = 0; k < 3; ++k)
            grad_h += nodal(tri.v[k]) * g[k];
        const double w = area / 3.0;
        // nudge quadrature points off edges toward the centroid so that a
        // gradient with an interface kink is sampled on the triangle's side
        const double cx = (p0.x + p1.x + p2.x) / 3.0;
        const double cy = (p0.y + p1.y + p2.y) / 3.0;
        const double delta = 1e-12;
        for (int k = 0; k < 3; ++k) {
            const Vec2& pa = mesh.vertices[tri.v[k]];
            const Vec2& pb = mesh.vertices[tri.v[(k + 1) % 3]];
            const double qx = 0.5 * (pa.x + pb.x) * (1.0 - delta) + delta * cx;
            const double qy = 0.5 * (pa.y + pb.y) * (1.0 - delta) + delta * cy;
            const Eigen::Vector2d diff = grad_h - exact_grad(qx, qy, t);
            total += w * diff.squaredNorm();
        }
    }
    return std::sqrt(total);
}

ConvergenceTable run_convergence(const ManufacturedProblem& problem, int levels, Scheme scheme,
                                 MassKind mass) {
    if (levels < 2)
        throw std::invalid_argument("run_convergence: need at least 2 levels for an order");
    ConvergenceTable table;
    for (int level = 0; level < levels; ++level) {
        const Mesh mesh = problem.make_mesh(level);
        const DofMap dofmap = build_dofmap(mesh);
        const CoefficientField coeffs = problem.make_coeffs(mesh);
        const DiscreteOperator op = build_operator(mesh, dofmap, coeffs);
        const int N = problem.base_steps << (2 * level);
        const TimeGrid grid = uniform_grid(problem.T, N);
        const Eigen::VectorXd u0 = interp(problem.exact, mesh, dofmap, 0.0).values;
        const Trajectory traj = solve_linear(op, problem.loads, u0, grid, scheme, mass);
        ConvergenceRow row;
        row.h = 1.0 / (problem.base_cells << level);
        row.l2 = l2_error(mesh, dofmap, traj.states.back(), problem.exact, problem.T);
        row.h1 = h1_seminorm_error(mesh, dofmap, traj.states.back(), problem.exact_grad,
                                   problem.T);
        table.rows.push_back(row);
    }
    for (size_t l = 1; l < table.rows.size(); ++l) {
        table.l2_orders.push_back(std::log2(table.rows[l - 1].l2 / table.rows[l].l2));
        table.h1_orders.push_back(std::log2(table.rows[l - 1].h1 / table.rows[l].h1));
    }
    return table;
}

} // namespace dynbc
