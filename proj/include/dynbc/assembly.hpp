#pragma once

#include <Eigen/Dense>

#include "dynbc/mesh.hpp"
#include "dynbc/state_space.hpp"

namespace dynbc {

// Per-cell diffusion matrix mu with declared ellipticity/norm bounds,
// positive weight eps per measure component, and surface coefficient b.
struct CoefficientField {
    std::vector<Eigen::Matrix2d> mu; // per cell
    double mu_lower = 1.0;           // ellipticity bound of sym(mu)
    double mu_upper = 1.0;           // operator norm bound
    MeasureWeight eps;
    double eps_lower = 1.0;
    std::vector<double> b_gamma; // per gamma edge
    std::vector<double> b_sigma; // per sigma edge

    static CoefficientField isotropic(const Mesh& mesh, double mu_value, double eps_value = 1.0,
                                      double b_value = 0.0);
    // Scalar mu per triangle region id (index into mu_by_region).
    static CoefficientField by_region(const Mesh& mesh, const std::vector<double>& mu_by_region,
                                      double eps_value = 1.0, double b_value = 0.0);
};

// Checks the declared mu bounds on a probe set (canonical basis plus seeded
// random unit vectors) and positivity of eps. Returns violations.
std::vector<std::string> check_coefficients(const Mesh& mesh, const CoefficientField& c,
                                            unsigned seed = 7);

// Stiffness K_ij = sum over cells |T| (mu grad phi_j) . grad phi_i over free dofs.
SparseMat assemble_stiffness(const Mesh& mesh, const DofMap& dofmap,
                             const std::vector<Eigen::Matrix2d>& mu);

// Lumped surface mass on gamma and sigma weighted by b.
SparseMat assemble_b_operator(const Mesh& mesh, const DofMap& dofmap,
                              const std::vector<double>& b_gamma,
                              const std::vector<double>& b_sigma);

// Load vector: 3-point (midpoint) rule on triangles, midpoint rule on edges.
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofmap, const ScalarField& f_omega,
                              const ScalarField& f_gamma, const ScalarField& f_sigma, double t);

struct EllipticityReport {
    double min_ratio = 0.0;
    bool satisfied = false; // min_ratio >= (mu_lower ^ 1) - 1e-10
};

// Sampled check of Re t[u,u] + |Ju|^2 >= (mu_lower ^ 1) |u|^2_{W^{1,2}}.
EllipticityReport ellipticity_report(const SparseMat& K, const Mesh& mesh, const DofMap& dofmap,
                                     double mu_lower, int n_samples = 200, unsigned seed = 11);

} // namespace dynbc
