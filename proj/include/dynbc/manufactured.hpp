#pragma once

#include "dynbc/linear_solver.hpp"

namespace dynbc {

// Manufactured-solution problem for convergence studies. Level l refines the
// base mesh by 2^l and the time grid by 4^l (tau proportional to h^2).
struct ManufacturedProblem {
    std::string name;
    std::function<Mesh(int level)> make_mesh;
    std::function<CoefficientField(const Mesh&)> make_coeffs;
    ScalarField exact;
    std::function<Eigen::Vector2d(double, double, double)> exact_grad;
    Loads loads;
    double T = 0.1;
    int base_steps = 8;
    int base_cells = 8;
};

// Smooth case: all-Dirichlet unit square, mu = I, eps = 1.
ManufacturedProblem manufactured_smooth();

// Interface-jump case: mu = 1 below the midline interface and 10 above; the
// exact solution has a conormal-derivative jump feeding f_Sigma.
ManufacturedProblem manufactured_jump();

double l2_error(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u,
                const ScalarField& exact, double t);
double h1_seminorm_error(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u,
                         const std::function<Eigen::Vector2d(double, double, double)>& exact_grad,
                         double t);

struct ConvergenceRow {
    double h = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::vector<double> l2_orders; // between consecutive levels
    std::vector<double> h1_orders;
};

ConvergenceTable run_convergence(const ManufacturedProblem& problem, int levels,
                                 Scheme scheme = Scheme::implicit_euler,
                                 MassKind mass = MassKind::consistent);

} // namespace dynbc
