#include "dynbc/linear_solver.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace dynbc {

Loads Loads::zero() {
    auto zero_field = [](double, double, double) { return 0.0; };
    return Loads{zero_field, zero_field, zero_field};
}

TimeGrid uniform_grid(double T, int N) {
    if (!(T > 0.0) || N < 1)
        throw std::invalid_argument("uniform_grid: need T > 0 and N >= 1");
    TimeGrid g;
    g.t.resize(N + 1);
    for (int n = 0; n <= N; ++n)
        g.t[n] = T * n / N;
    g.t[N] = T;
    return g;
}

TimeGrid graded_grid(double T, int N, const WeightedNormSpec& spec) {
    if (!(T > 0.0) || N < 2)
        throw std::invalid_argument("graded_grid: need T > 0 and N >= 2");
    const double denom = spec.s * spec.alpha - 1.0;
    const double gamma = std::max(1.0, denom > 0.0 ? spec.s / denom : 1.0);
    TimeGrid g;
    g.gamma = gamma;
    g.t.resize(N + 1);
    for (int n = 0; n <= N; ++n)
        g.t[n] = T * std::pow(double(n) / N, gamma);
    g.t[N] = T;
    return g;
}

Trajectory solve_linear(const DiscreteOperator& op, const Loads& loads,
                        const Eigen::VectorXd& u0, const TimeGrid& grid, Scheme scheme,
                        MassKind mass) {
    if (grid.t.size() < 2)
        throw std::invalid_argument("solve_linear: grid needs at least one step");
    const Mesh& mesh = *op.mesh;
    const DofMap& dofmap = *op.dofmap;
    const SparseMat& M = op.mass(mass, MassWeight::eps);
    const SparseMat KB = op.K + op.B;

    Trajectory traj;
    traj.grid = grid;
    traj.states.push_back(u0);

    Eigen::SparseLU<SparseMat> lu;
    double tau_factored = -1.0;
    Eigen::VectorXd F_prev;
    if (scheme == Scheme::crank_nicolson)
        F_prev = assemble_load(mesh, dofmap, loads.f_omega, loads.f_gamma, loads.f_sigma,
                               grid.t[0]);

    for (int n = 1; n <= grid.n_steps(); ++n) {
        const double tau = grid.tau(n);
        const Eigen::VectorXd F =
            assemble_load(mesh, dofmap, loads.f_omega, loads.f_gamma, loads.f_sigma, grid.t[n]);
        const Eigen::VectorXd& prev = traj.states.back();

        Eigen::VectorXd rhs;
        if (scheme == Scheme::implicit_euler) {
            if (tau != tau_factored) {
                lu.compute(M + tau * KB);
                tau_factored = tau;
            }
            rhs = M * prev + tau * F;
        } else {
            if (tau != tau_factored) {
                lu.compute(M + 0.5 * tau * KB);
                tau_factored = tau;
            }
            rhs = M * prev - 0.5 * tau * (KB * prev) + 0.5 * tau * (F + F_prev);
        }
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("solve_linear: factorization failed at step " +
                                     std::to_string(n) + " (tau = " + std::to_string(tau) + ")");
        Eigen::VectorXd next = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("solve_linear: solve failed at step " + std::to_string(n));
        traj.derivatives.push_back((next - prev) / tau);
        traj.states.push_back(std::move(next));
        if (scheme == Scheme::crank_nicolson)
            F_prev = F;
    }
    return traj;
}

namespace {

double spatial_norm(const DiscreteOperator& op, const WeightedNormSpec& spec,
                    const Eigen::VectorXd& v) {
    const Mesh& mesh = *op.mesh;
    const DofMap& dofmap = *op.dofmap;
    if (spec.norm == SpatialNorm::lp)
        return lp_norm(mesh, dofmap, v, spec.p);
    // Domain seminorm: ||M^{-1}(K+B) v||_{L^p} with the lumped mass.
    Eigen::VectorXd Av = op.K * v + op.B * v;
    for (int i = 0; i < Av.size(); ++i)
        Av[i] /= op.M_lumped.coeff(i, i);
    return lp_norm(mesh, dofmap, Av, spec.p);
}

} // namespace

double weighted_norm(const DiscreteOperator& op, const Trajectory& traj,
                     const WeightedNormSpec& spec, NormTarget which) {
    if (!(spec.alpha > 1.0 / spec.s) || !(spec.alpha <= 1.0))
        throw std::invalid_argument("weighted_norm: need 1/s < alpha <= 1");
    double total = 0.0;
    for (int n = 1; n <= traj.grid.n_steps(); ++n) {
        const Eigen::VectorXd& v =
            which == NormTarget::value ? traj.states[n] : traj.derivatives[n - 1];
        const double x = std::pow(traj.grid.t[n], 1.0 - spec.alpha) * spatial_norm(op, spec, v);
        total += traj.grid.tau(n) * std::pow(x, spec.s);
    }
    return std::pow(total, 1.0 / spec.s);
}

double apriori_ratio(const DiscreteOperator& op, const Trajectory& traj,
                     const Eigen::VectorXd& u0, const Loads& loads,
                     const WeightedNormSpec& spec) {
    const Mesh& mesh = *op.mesh;
    const DofMap& dofmap = *op.dofmap;

    WeightedNormSpec lp_spec = spec;
    lp_spec.norm = SpatialNorm::lp;
    WeightedNormSpec dom_spec = spec;
    dom_spec.norm = SpatialNorm::domain;
    const double numer =
        weighted_norm(op, traj, lp_spec, NormTarget::derivative) +
        weighted_norm(op, traj, dom_spec, NormTarget::value);

    // ||(A+1)^{alpha - 1/s} u0||: positive fractional power through the
    // integral representation of (A+1)^{-(1 - (alpha - 1/s))} applied to (A+1)u0.
    const double theta_pos = spec.alpha - 1.0 / spec.s;
    Eigen::VectorXd Au0 = op.K * u0;
    for (int i = 0; i < Au0.size(); ++i)
        Au0[i] /= op.M_lumped.coeff(i, i);
    Au0 += u0;
    const Eigen::VectorXd frac =
        fractional_power_apply(op, 1.0 - theta_pos, Au0, 200, false, MassKind::lumped);

    double u0_proxy = lp_norm(mesh, dofmap, u0, spec.p) + lp_norm(mesh, dofmap, frac, spec.p);

    // Weighted norm of f through its lumped nodal representative.
    double f_total = 0.0;
    for (int n = 1; n <= traj.grid.n_steps(); ++n) {
        Eigen::VectorXd F = assemble_load(mesh, dofmap, loads.f_omega, loads.f_gamma,
                                          loads.f_sigma, traj.grid.t[n]);
        for (int i = 0; i < F.size(); ++i)
            F[i] /= op.M_lumped.coeff(i, i);
        const double x =
            std::pow(traj.grid.t[n], 1.0 - spec.alpha) * lp_norm(mesh, dofmap, F, spec.p);
        f_total += traj.grid.tau(n) * std::pow(x, spec.s);
    }
    const double denom = u0_proxy + std::pow(f_total, 1.0 / spec.s);
    if (!(denom > 0.0))
        throw std::invalid_argument("apriori_ratio: zero denominator");
    return numer / denom;
}

} // namespace dynbc
