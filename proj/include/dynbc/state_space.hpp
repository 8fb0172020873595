#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dynbc/mesh.hpp"

namespace dynbc {

using SparseMat = Eigen::SparseMatrix<double>;

// Scalar field on Omega (and its boundary/interface), sampled at (x, y, t).
using ScalarField = std::function<double(double, double, double)>;

// Free/Dirichlet node partition plus lumped measure weights per mesh vertex.
// A vertex incident to any dirichlet edge is a Dirichlet node, even when it
// also touches gamma edges.
struct DofMap {
    std::vector<int> free_nodes;        // mesh vertex id per free dof
    std::vector<int> dirichlet_nodes;
    std::vector<int> node_to_free;      // -1 for Dirichlet vertices
    std::vector<double> volume_weight;  // per mesh vertex, integral of the hat
    std::vector<double> surface_weight; // per mesh vertex, over gamma+sigma edges

    int n_free() const { return static_cast<int>(free_nodes.size()); }
};

DofMap build_dofmap(const Mesh& mesh);

// Nodal coefficients over the free dofs; Dirichlet values are implicitly zero.
struct StateFunction {
    Eigen::VectorXd values;
    const DofMap* dofmap = nullptr;
};

// Positive weight per measure component: one value per cell and per
// gamma/sigma edge.
struct MeasureWeight {
    std::vector<double> cell;
    std::vector<double> gamma_edge;
    std::vector<double> sigma_edge;

    static MeasureWeight unit(const Mesh& mesh);
    static MeasureWeight constant(const Mesh& mesh, double value);
};

// Weighted mass over free dofs: volume P1 mass plus the gamma/sigma edge
// mass. Lumping row-sums onto the diagonal.
SparseMat assemble_mass(const Mesh& mesh, const DofMap& dofmap, const MeasureWeight& w,
                        bool lumped);

// Nodal weight per free dof induced by a measure weight: the ratio of the
// lumped weighted mass diagonal to the unweighted one.
Eigen::VectorXd nodal_weight(const Mesh& mesh, const DofMap& dofmap, const MeasureWeight& w);

// Lumped-quadrature L^p norm over the combined measure dx + drho, with the
// measure scaled by varsigma^{-1} (unit weight when varsigma is empty).
// p = infinity gives the nodal max norm.
double lp_norm(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& u, double p,
               const Eigen::VectorXd& varsigma = Eigen::VectorXd());

// Nodal interpolant of f at t = 0; Dirichlet nodes are ignored.
StateFunction interp(const ScalarField& f, const Mesh& mesh, const DofMap& dofmap,
                     double t = 0.0);

} // namespace dynbc
