#pragma once

#include <span>

#include "dynbc/linear_solver.hpp"

namespace dynbc {

// Union of triangles with the induced boundary structure.
struct ControlVolume {
    std::vector<int> triangles;
    std::vector<char> in_volume;       // per mesh triangle
    std::vector<int> interior_nodes;   // free nodes with every incident triangle inside
    std::vector<char> is_interior;     // per mesh vertex
    std::vector<int> sigma_edges;      // sigma edges with both incident triangles inside
    std::vector<int> gamma_edges;      // indices into the gamma subsequence of boundary_edges
    std::vector<std::pair<int, int>> boundary_facets; // (inside triangle, opposite local vertex)
};

ControlVolume make_control_volume(const Mesh& mesh, std::vector<int> triangles);

// residual_n = [<M_eps u_n> - <M_eps u_{n-1}>]/tau_n - <F(t_n)>. Requires a
// mesh without Dirichlet edges and b = 0.
std::vector<double> global_balance_residual(const DiscreteOperator& op, const Trajectory& traj,
                                            const Loads& loads, MassKind mass);

struct FluxReport {
    double t = 0.0;
    double storage = 0.0;          // rate of change of the eps-weighted content of U
    double boundary_flux = 0.0;    // conservative flux out of U through its boundary
    double volume_source = 0.0;
    double gamma_source = 0.0;
    double interface_source = 0.0;
    double residual = 0.0;         // storage + flux - sources
};

// Per-step flux balance over a control volume, using equilibrated
// element-residual flux reconstruction.
std::vector<FluxReport> subdomain_flux_balance(const Mesh& mesh, const DofMap& dofmap,
                                               const CoefficientField& coeffs,
                                               const Trajectory& traj, const Loads& loads,
                                               const ControlVolume& cv, MassKind mass);

// Flux out of cv through the given node set at one step (element-residual
// contributions of those nodes, from inside triangles and edges).
double directed_flux(const Mesh& mesh, const DofMap& dofmap, const CoefficientField& coeffs,
                     const Trajectory& traj, const Loads& loads, const ControlVolume& cv,
                     std::span<const int> nodes, int step, MassKind mass);

} // namespace dynbc
