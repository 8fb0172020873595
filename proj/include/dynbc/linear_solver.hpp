#pragma once

#include <vector>

#include "dynbc/operator.hpp"

namespace dynbc {

struct TimeGrid {
    std::vector<double> t; // 0 = t_0 < ... < t_N = T
    double gamma = 1.0;    // grading exponent

    int n_steps() const { return static_cast<int>(t.size()) - 1; }
    double T() const { return t.back(); }
    double tau(int n) const { return t[n] - t[n - 1]; } // n in 1..N
};

enum class SpatialNorm { lp, domain };
enum class NormTarget { value, derivative };

struct WeightedNormSpec {
    double s = 2.0;
    double alpha = 1.0; // 1/s < alpha <= 1
    SpatialNorm norm = SpatialNorm::lp;
    double p = 2.0;
};

struct Trajectory {
    TimeGrid grid;
    std::vector<Eigen::VectorXd> states;      // per node, N+1 entries
    std::vector<Eigen::VectorXd> derivatives; // per step, N entries
};

struct Loads {
    ScalarField f_omega;
    ScalarField f_gamma;
    ScalarField f_sigma;

    static Loads zero();
};

TimeGrid uniform_grid(double T, int N);

// t_n = T (n/N)^gamma with gamma = max(1, s/(s alpha - 1)).
TimeGrid graded_grid(double T, int N, const WeightedNormSpec& spec);

// Implicit Euler: (M_eps + tau_n (K+B)) u_n = M_eps u_{n-1} + tau_n F(t_n);
// Crank-Nicolson is the trapezoidal analogue.
Trajectory solve_linear(const DiscreteOperator& op, const Loads& loads,
                        const Eigen::VectorXd& u0, const TimeGrid& grid,
                        Scheme scheme = Scheme::implicit_euler,
                        MassKind mass = MassKind::consistent);

// Right-endpoint rule for the L^s_alpha(J;X) norm of the trajectory (values
// or discrete derivatives).
double weighted_norm(const DiscreteOperator& op, const Trajectory& traj,
                     const WeightedNormSpec& spec, NormTarget which);

// Discrete a priori ratio: (|u'|_{s,alpha,Lp} + |Au|_{s,alpha,Lp}) over
// (|u0|_{Lp} + |(A+1)^{alpha-1/s} u0|_{Lp} + |f|_{s,alpha,Lp}).
double apriori_ratio(const DiscreteOperator& op, const Trajectory& traj,
                     const Eigen::VectorXd& u0, const Loads& loads,
                     const WeightedNormSpec& spec);

} // namespace dynbc
