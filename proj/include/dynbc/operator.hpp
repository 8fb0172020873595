#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dynbc/assembly.hpp"
#include "dynbc/mesh.hpp"
#include "dynbc/state_space.hpp"

namespace dynbc {

enum class MassKind { lumped, consistent };
enum class MassWeight { unit, eps };
enum class Scheme { implicit_euler, crank_nicolson };

// Assembled realization of the elliptic operator and its masses on the free dofs.
struct DiscreteOperator {
    const Mesh* mesh = nullptr;
    const DofMap* dofmap = nullptr;
    SparseMat K;
    SparseMat B;
    SparseMat M_consistent;
    SparseMat M_lumped;
    SparseMat M_eps_consistent;
    SparseMat M_eps_lumped;
    double mu_lower = 1.0;
    double mu_upper = 1.0;

    const SparseMat& mass(MassKind kind, MassWeight weight = MassWeight::unit) const {
        if (weight == MassWeight::eps)
            return kind == MassKind::lumped ? M_eps_lumped : M_eps_consistent;
        return kind == MassKind::lumped ? M_lumped : M_consistent;
    }
};

DiscreteOperator build_operator(const Mesh& mesh, const DofMap& dofmap,
                                const CoefficientField& coeffs);

// Sparse direct solve of A x = rhs; throws on factorization failure or when
// the relative residual exceeds 1e-10.
Eigen::VectorXd sparse_solve(const SparseMat& A, const Eigen::VectorXd& rhs);

// x = (K [+ B] + lambda M)^{-1} M g, the resolvent at -lambda.
Eigen::VectorXd resolvent_apply(const DiscreteOperator& op, double lambda,
                                const Eigen::VectorXd& g, bool include_B = false,
                                MassKind mass = MassKind::consistent);

// One step of the semigroup generated by -(M_w^{-1}(K+B)).
Eigen::VectorXd semigroup_step(const DiscreteOperator& op, const Eigen::VectorXd& w, double tau,
                               Scheme scheme = Scheme::implicit_euler,
                               MassKind mass = MassKind::lumped,
                               MassWeight weight = MassWeight::unit);

struct NumericalRangeReport {
    double max_abs_arg = 0.0;
    double min_re = 0.0;
    int n_used = 0;
};

// Sampled numerical range of the form: z = phi^* K phi for seeded complex
// samples phi = u + iv. Samples with |z| <= 1e-14 are skipped.
NumericalRangeReport numerical_range_probe(const DiscreteOperator& op, int n_samples,
                                           unsigned seed);

// (A + 1)^{-theta} g via the real integral representation of the fractional
// power, log-substituted composite Gauss-Legendre with about n_nodes nodes.
Eigen::VectorXd fractional_power_apply(const DiscreteOperator& op, double theta,
                                       const Eigen::VectorXd& g, int n_nodes = 200,
                                       bool include_B = false,
                                       MassKind mass = MassKind::consistent);

// Generalized eigenpairs K v = lambda M v (dense; free-dof count <= 2000).
struct EigenOracle {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd vectors;      // columns
    Eigen::MatrixXd M;            // dense mass used in the factorization
    bool symmetric = false;       // M-orthonormal columns when true
    double residual = 0.0;        // ||K V - M V Lambda|| / ||K||

    // f(A) g for the generator A = M^{-1} K.
    Eigen::VectorXd apply_function(const std::function<double(double)>& f,
                                   const Eigen::VectorXd& g) const;
};

EigenOracle dense_eigen_oracle(const DiscreteOperator& op, bool include_B = false,
                               MassKind mass = MassKind::consistent);

struct UltraProbe {
    std::vector<double> t;     // strictly increasing, positive
    int steps_per_t = 20;      // implicit Euler substeps per sample time
};

struct UltraSample {
    double t = 0.0;
    double norm_1_to_inf = 0.0;
};

// Estimates ||S_t||_{1->inf} by propagating lumped-L1-normalized nodal deltas.
std::vector<UltraSample> ultracontractivity_probe(const DiscreteOperator& op,
                                                  const UltraProbe& probe);

// Fitted log-log slope of the probe table.
double ultra_loglog_slope(const std::vector<UltraSample>& samples);

} // namespace dynbc
