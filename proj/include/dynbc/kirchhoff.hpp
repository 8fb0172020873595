#pragma once

#include <functional>
#include <optional>
#include <string>

#include "dynbc/linear_solver.hpp"

namespace dynbc {

// Nonlinearity pair (a, b): a is the diffusion nonlinearity, b the storage
// one. Evaluations are restricted to the working interval [-x_max, x_max].
struct Nonlinearity {
    std::function<double(double)> a;
    std::function<double(double)> da;
    std::function<double(double)> b;
    std::function<double(double)> db;
    std::function<double(double)> d2b;
    double x_max = 50.0;
    // Closed-form antiderivative of a and its inverse, when available.
    std::optional<std::function<double(double)>> transform_closed;
    std::optional<std::function<double(double)>> inverse_closed;

    static Nonlinearity identity();
    // a(z) = eta0 + |z|^m with eta0 > 0, m >= 1; b = id.
    static Nonlinearity power(double eta0, double m);
    // a = exp, b = id.
    static Nonlinearity exponential();
    // Phase-separation style pair with b the Fermi-Dirac integral F_{1/2}
    // and a = b'.
    static Nonlinearity fermi_dirac_b();
};

// Diagnostic sampling of the Nonlinearity invariants (positivity of a and
// b', finite-difference consistency of b'); empty result iff sound.
std::vector<std::string> check_nonlinearity(const Nonlinearity& nl, int n_samples = 64);

// Kirchhoff transform: integral of a from 0 to xi.
double kirchhoff(const Nonlinearity& nl, double xi);

// Monotone inversion (bracketing bisection refined by Newton);
// |K(xi) - y| <= 1e-11 (1 + |y|).
double kirchhoff_inverse(const Nonlinearity& nl, double y);

// eta = (a/b')(K^{-1}(w)) / eps.
double eta(const Nonlinearity& nl, double eps_node, double w);

// Fermi-Dirac integral F_{1/2}(s), relative tolerance 1e-10 on [-50, 50].
double fermi_dirac(double s);
double fermi_dirac_derivative(double s);

struct ReactionSpec {
    std::function<double(double, double)> F_omega; // (t, xi)
    std::function<double(double, double)> F_gamma;
    std::function<double(double, double)> F_sigma;
    static ReactionSpec zero();
};

// Nodal reaction field per measure component, each scaled by the nodal eta.
struct ReactionField {
    Eigen::VectorXd volume;
    Eigen::VectorXd gamma;
    Eigen::VectorXd sigma;
    Eigen::VectorXd eta;   // nodal eta used for the scaling
    Eigen::VectorXd xi;    // nodal K^{-1}(w)
};

ReactionField reaction(const ReactionSpec& spec, const Nonlinearity& nl, const Mesh& mesh,
                       const DofMap& dofmap, const CoefficientField& coeffs, double t,
                       const Eigen::VectorXd& w);

// Lumped load-vector pairing of a reaction field.
Eigen::VectorXd reaction_load(const Mesh& mesh, const DofMap& dofmap, const ReactionField& r);

struct QuasiControls {
    int k_max = 5;            // fixed-point refresh cap per step
    double step_tol = 1e-9;
    double w_max = 1e6;       // blow-up bound on ||w||_inf
};

enum class ExitReason { completed, bound_exceeded, inversion_failure, fixed_point_divergence };

std::string to_string(ExitReason reason);

struct QuasiResult {
    Trajectory w;                 // transformed variable
    Trajectory u;                 // original variable, u = K^{-1}(w) nodewise
    double t_star = 0.0;          // exit time (== grid T when completed)
    ExitReason reason = ExitReason::completed;
    std::vector<int> fp_iterations;   // per accepted step
    std::vector<double> step_residuals;
    bool nonmonotone_flagged = false; // a step was accepted from its best iterate
};

// Semi-implicit step for dt w + eta(w) A w = R(t, w): freeze the nodal
// multiplier varsigma = eta(w_prev)^{-1}, solve
// (M_varsigma + tau K) w_n = M_varsigma w_prev + tau varsigma . reaction_load,
// with optional fixed-point refresh. Early exit is reported in (t_star, reason).
QuasiResult solve_quasilinear(const DiscreteOperator& op, const CoefficientField& coeffs,
                              const Nonlinearity& nl, const ReactionSpec& spec,
                              const Eigen::VectorXd& u0, const TimeGrid& grid,
                              const QuasiControls& controls = {});

} // namespace dynbc
