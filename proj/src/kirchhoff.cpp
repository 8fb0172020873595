#include "dynbc/kirchhoff.hpp"

#include <cmath>
#include <stdexcept>

namespace dynbc {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b)
        return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace

double fermi_dirac(double s) {
    if (s < -50.0 || s > 50.0)
        throw std::invalid_argument("fermi_dirac: s outside [-50, 50]");
    // substitution xi = r^2 removes the sqrt kink at the origin
    auto integrand = [s](double r) {
        const double e = r * r - s;
        // 1/(1+e^e), overflow-safe
        const double frac = e > 0.0 ? std::exp(-e) / (1.0 + std::exp(-e)) : 1.0 / (1.0 + std::exp(e));
        return 2.0 * r * r * frac;
    };
    const double r_max = std::sqrt(std::max(s, 0.0) + 80.0);
    const double scale = std::max(std::exp(std::min(s, 0.0)), 1e-30);
    return (2.0 / kSqrtPi) * integrate(integrand, 0.0, r_max, 1e-11 * scale);
}

double fermi_dirac_derivative(double s) {
    auto integrand = [s](double r) {
        const double e = r * r - s;
        const double ee = std::exp(-std::abs(e));
        const double denom = (1.0 + ee);
        return 2.0 * r * r * ee / (denom * denom);
    };
    const double r_max = std::sqrt(std::max(s, 0.0) + 80.0);
    const double scale = std::max(std::exp(std::min(s, 0.0)), 1e-30);
    return (2.0 / kSqrtPi) * integrate(integrand, 0.0, r_max, 1e-11 * scale);
}

Nonlinearity Nonlinearity::identity() {
    Nonlinearity nl;
    nl.a = [](double) { return 1.0; };
    nl.da = [](double) { return 0.0; };
    nl.b = [](double x) { return x; };
    nl.db = [](double) { return 1.0; };
    nl.d2b = [](double) { return 0.0; };
    nl.transform_closed = [](double x) { return x; };
    nl.inverse_closed = [](double y) { return y; };
    return nl;
}

Nonlinearity Nonlinearity::power(double eta0, double m) {
    if (!(eta0 > 0.0) || !(m >= 1.0))
        throw std::invalid_argument("Nonlinearity::power: need eta0 > 0 and m >= 1");
    Nonlinearity nl;
    nl.a = [eta0, m](double x) { return eta0 + std::pow(std::abs(x), m); };
    nl.da = [m](double x) {
        return (x == 0.0) ? 0.0
                          : m * std::pow(std::abs(x), m - 1.0) * (x > 0.0 ? 1.0 : -1.0);
    };
    nl.b = [](double x) { return x; };
    nl.db = [](double) { return 1.0; };
    nl.d2b = [](double) { return 0.0; };
    nl.transform_closed = [eta0, m](double x) {
        const double s = x >= 0.0 ? 1.0 : -1.0;
        return eta0 * x + s * std::pow(std::abs(x), m + 1.0) / (m + 1.0);
    };
    return nl;
}

Nonlinearity Nonlinearity::exponential() {
    Nonlinearity nl;
    nl.a = [](double x) { return std::exp(x); };
    nl.da = [](double x) { return std::exp(x); };
    nl.b = [](double x) { return x; };
    nl.db = [](double) { return 1.0; };
    nl.d2b = [](double) { return 0.0; };
    nl.transform_closed = [](double x) { return std::expm1(x); };
    nl.inverse_closed = [](double y) { return std::log1p(y); };
    return nl;
}

Nonlinearity Nonlinearity::fermi_dirac_b() {
    Nonlinearity nl;
    nl.b = [](double x) { return fermi_dirac(x); };
    nl.db = [](double x) { return fermi_dirac_derivative(x); };
    nl.d2b = [](double x) {
        const double h = 1e-4;
        return (fermi_dirac_derivative(x + h) - fermi_dirac_derivative(x - h)) / (2.0 * h);
    };
    nl.a = nl.db; // phase-separation pairing a = b'
    nl.da = nl.d2b;
    // a = b' makes the transform the increment of b itself
    const double b0 = fermi_dirac(0.0);
    nl.transform_closed = [b0](double xi) { return fermi_dirac(xi) - b0; };
    return nl;
}

std::vector<std::string> check_nonlinearity(const Nonlinearity& nl, int n_samples) {
    std::vector<std::string> report;
    // sample strictly inside the working interval so the centered difference
    // below stays evaluable at the endpoints
    const double half = nl.x_max - 1e-3;
    for (int k = 0; k <= n_samples; ++k) {
        const double x = -half + 2.0 * half * k / n_samples;
        if (!(nl.a(x) > 0.0))
            report.push_back("a not positive at x = " + std::to_string(x));
        if (!(nl.db(x) > 0.0))
            report.push_back("b' not positive at x = " + std::to_string(x));
        const double h = 1e-4;
        const double fd = (nl.b(x + h) - nl.b(x - h)) / (2.0 * h);
        if (std::abs(fd - nl.db(x)) > 1e-5 * (1.0 + std::abs(nl.db(x))))
            report.push_back("b' inconsistent with b at x = " + std::to_string(x));
    }
    return report;
}

double kirchhoff(const Nonlinearity& nl, double xi) {
    if (std::abs(xi) > nl.x_max * (1.0 + 1e-12))
        throw std::invalid_argument("kirchhoff: xi outside working interval");
    if (xi == 0.0)
        return 0.0;
    if (nl.transform_closed)
        return (*nl.transform_closed)(xi);
    return integrate(nl.a, 0.0, xi, 1e-13);
}

double kirchhoff_inverse(const Nonlinearity& nl, double y) {
    if (y == 0.0)
        return 0.0;
    if (nl.inverse_closed)
        return (*nl.inverse_closed)(y);

    double lo = -nl.x_max;
    double hi = nl.x_max;
    if (y < kirchhoff(nl, lo) || y > kirchhoff(nl, hi))
        throw std::out_of_range("kirchhoff_inverse: target outside the attainable range of the "
                                "working interval");
    // K is strictly increasing; bisect, then polish with Newton (K' = a).
    for (int it = 0; it < 60 && hi - lo > 1e-9 * nl.x_max; ++it) {
        const double mid = 0.5 * (lo + hi);
        (kirchhoff(nl, mid) < y ? lo : hi) = mid;
    }
    double xi = 0.5 * (lo + hi);
    const double tol = 1e-11 * (1.0 + std::abs(y));
    for (int it = 0; it < 50; ++it) {
        const double r = kirchhoff(nl, xi) - y;
        if (std::abs(r) <= tol)
            return xi;
        const double slope = nl.a(xi);
        double next = xi - r / slope;
        if (next < lo || next > hi)
            next = 0.5 * (lo + hi);
        (r < 0.0 ? lo : hi) = xi;
        xi = next;
    }
    if (std::abs(kirchhoff(nl, xi) - y) <= tol)
        return xi;
    throw std::runtime_error("kirchhoff_inverse: Newton refinement did not converge");
}

double eta(const Nonlinearity& nl, double eps_node, double w) {
    if (!(eps_node > 0.0))
        throw std::invalid_argument("eta: eps must be positive");
    const double xi = kirchhoff_inverse(nl, w);
    const double value = nl.a(xi) / nl.db(xi) / eps_node;
    if (!(value > 0.0))
        throw std::runtime_error("eta: nonpositive value");
    return value;
}

ReactionSpec ReactionSpec::zero() {
    auto z = [](double, double) { return 0.0; };
    return ReactionSpec{z, z, z};
}

namespace {

// Per-node half-edge-length weights, split by tag.
void split_surface_weights(const Mesh& mesh, Eigen::VectorXd& wg, Eigen::VectorXd& ws,
                           const DofMap& dofmap) {
    wg = Eigen::VectorXd::Zero(dofmap.n_free());
    ws = Eigen::VectorXd::Zero(dofmap.n_free());
    auto add = [&](Eigen::VectorXd& w, int a, int b) {
        const double half = 0.5 * edge_length(mesh, a, b);
        if (dofmap.node_to_free[a] >= 0)
            w[dofmap.node_to_free[a]] += half;
        if (dofmap.node_to_free[b] >= 0)
            w[dofmap.node_to_free[b]] += half;
    };
    for (const auto& be : mesh.boundary_edges)
        if (be.tag == BoundaryTag::gamma)
            add(wg, be.a, be.b);
    for (const auto& se : mesh.sigma_edges)
        add(ws, se.a, se.b);
}

} // namespace

ReactionField reaction(const ReactionSpec& spec, const Nonlinearity& nl, const Mesh& mesh,
                       const DofMap& dofmap, const CoefficientField& coeffs, double t,
                       const Eigen::VectorXd& w) {
    const int n = dofmap.n_free();
    const Eigen::VectorXd eps_nodal = nodal_weight(mesh, dofmap, coeffs.eps);
    ReactionField r;
    r.volume.resize(n);
    r.gamma = Eigen::VectorXd::Zero(n);
    r.sigma = Eigen::VectorXd::Zero(n);
    r.eta.resize(n);
    r.xi.resize(n);
    Eigen::VectorXd wg, ws;
    split_surface_weights(mesh, wg, ws, dofmap);
    for (int i = 0; i < n; ++i) {
        double xi;
        try {
            xi = kirchhoff_inverse(nl, w[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("reaction: inversion failure at node " + std::to_string(i) +
                                     ": " + e.what());
        }
        const double eta_i = nl.a(xi) / nl.db(xi) / eps_nodal[i];
        r.xi[i] = xi;
        r.eta[i] = eta_i;
        r.volume[i] = eta_i * spec.F_omega(t, xi);
        if (wg[i] > 0.0)
            r.gamma[i] = eta_i * spec.F_gamma(t, xi);
        if (ws[i] > 0.0)
            r.sigma[i] = eta_i * spec.F_sigma(t, xi);
    }
    return r;
}

Eigen::VectorXd reaction_load(const Mesh& mesh, const DofMap& dofmap, const ReactionField& r) {
    const int n = dofmap.n_free();
    Eigen::VectorXd wg, ws;
    split_surface_weights(mesh, wg, ws, dofmap);
    Eigen::VectorXd load(n);
    for (int i = 0; i < n; ++i) {
        const double vol = dofmap.volume_weight[dofmap.free_nodes[i]];
        load[i] = vol * r.volume[i] + wg[i] * r.gamma[i] + ws[i] * r.sigma[i];
    }
    return load;
}

std::string to_string(ExitReason reason) {
    switch (reason) {
    case ExitReason::completed: return "completed";
    case ExitReason::bound_exceeded: return "bound exceeded";
    case ExitReason::inversion_failure: return "inversion failure";
    case ExitReason::fixed_point_divergence: return "fixed-point divergence";
    }
    return "unknown";
}

QuasiResult solve_quasilinear(const DiscreteOperator& op, const CoefficientField& coeffs,
                              const Nonlinearity& nl, const ReactionSpec& spec,
                              const Eigen::VectorXd& u0, const TimeGrid& grid,
                              const QuasiControls& controls) {
    const Mesh& mesh = *op.mesh;
    const DofMap& dofmap = *op.dofmap;
    const int n = dofmap.n_free();

    QuasiResult result;
    result.w.grid = grid;
    result.u.grid = grid;

    Eigen::VectorXd w0(n);
    for (int i = 0; i < n; ++i)
        w0[i] = kirchhoff(nl, u0[i]);
    result.w.states.push_back(w0);
    result.u.states.push_back(u0);
    result.t_star = grid.t[0];

    const Eigen::VectorXd m_lumped = op.M_lumped.diagonal();

    for (int step = 1; step <= grid.n_steps(); ++step) {
        const double tn = grid.t[step];
        const double tau = grid.tau(step);
        const Eigen::VectorXd& w_prev = result.w.states.back();

        Eigen::VectorXd iterate = w_prev;
        Eigen::VectorXd best = w_prev;
        double best_residual = std::numeric_limits<double>::infinity();
        double prev_residual = std::numeric_limits<double>::infinity();
        bool monotone = true;
        int iters = 0;
        bool failed = false;

        for (int k = 0; k < std::max(1, controls.k_max); ++k) {
            ReactionField r;
            try {
                r = reaction(spec, nl, mesh, dofmap, coeffs, tn, iterate);
            } catch (const std::exception&) {
                result.reason = ExitReason::inversion_failure;
                failed = true;
                break;
            }
            // varsigma = eta^{-1} nodal weights in a lumped mass
            const Eigen::VectorXd varsigma = r.eta.cwiseInverse();
            const Eigen::VectorXd m_vs = m_lumped.cwiseProduct(varsigma);
            SparseMat A = tau * op.K;
            for (int i = 0; i < n; ++i)
                A.coeffRef(i, i) += m_vs[i];
            const Eigen::VectorXd rhs =
                m_vs.cwiseProduct(w_prev) +
                tau * varsigma.cwiseProduct(reaction_load(mesh, dofmap, r));
            Eigen::VectorXd next;
            try {
                next = sparse_solve(A, rhs);
            } catch (const std::exception&) {
                result.reason = ExitReason::fixed_point_divergence;
                failed = true;
                break;
            }
            const double res = (next - iterate).lpNorm<Eigen::Infinity>() /
                               (1.0 + next.lpNorm<Eigen::Infinity>());
            ++iters;
            if (res < best_residual) {
                best_residual = res;
                best = next;
            }
            if (k > 0 && res > prev_residual)
                monotone = false;
            prev_residual = res;
            iterate = next;
            if (res <= controls.step_tol)
                break;
        }
        if (failed) {
            result.t_star = grid.t[step - 1];
            return result;
        }
        if (!monotone)
            result.nonmonotone_flagged = true;
        const Eigen::VectorXd& w_new = best;
        if (w_new.lpNorm<Eigen::Infinity>() > controls.w_max) {
            result.reason = ExitReason::bound_exceeded;
            result.t_star = grid.t[step - 1];
            return result;
        }
        Eigen::VectorXd u_new(n);
        bool inv_ok = true;
        for (int i = 0; i < n && inv_ok; ++i) {
            try {
                u_new[i] = kirchhoff_inverse(nl, w_new[i]);
            } catch (const std::exception&) {
                inv_ok = false;
            }
        }
        if (!inv_ok) {
            result.reason = ExitReason::inversion_failure;
            result.t_star = grid.t[step - 1];
            return result;
        }
        result.w.derivatives.push_back((w_new - w_prev) / tau);
        result.u.derivatives.push_back((u_new - result.u.states.back()) / tau);
        result.w.states.push_back(w_new);
        result.u.states.push_back(u_new);
        result.fp_iterations.push_back(iters);
        result.step_residuals.push_back(best_residual);
        result.t_star = tn;
    }
    result.reason = ExitReason::completed;
    return result;
}

} // namespace dynbc
