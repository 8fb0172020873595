// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dynbc/balance.hpp"
#include "dynbc/driver.hpp"
#include "dynbc/kirchhoff.hpp"
#include "dynbc/manufactured.hpp"

using namespace dynbc;

namespace {

struct Gate {
    int failures = 0;

    void run(const std::string& name, double time_budget_s,
             const std::function<void(std::vector<std::string>&)>& body) {
        std::vector<std::string> problems;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(problems);
        } catch (const std::exception& e) {
            problems.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (time_budget_s > 0.0 && elapsed > time_budget_s) {
            std::ostringstream ss;
            ss << "runtime " << elapsed << " s exceeds budget " << time_budget_s << " s";
            problems.push_back(ss.str());
        }
        if (problems.empty()) {
            std::printf("[PASS] %s (%.2f s)\n", name.c_str(), elapsed);
        } else {
            ++failures;
            std::printf("[FAIL] %s (%.2f s)\n", name.c_str(), elapsed);
            for (const auto& p : problems)
                std::printf("       %s\n", p.c_str());
        }
        std::fflush(stdout);
    }
};

void expect(std::vector<std::string>& problems, bool ok, const std::string& what,
            double measured, double bound) {
    if (!ok) {
        std::ostringstream ss;
        ss.precision(12);
        ss << what << ": measured " << measured << " vs bound " << bound;
        problems.push_back(ss.str());
    }
}

Mesh rect(int nx, int ny, std::optional<double> iy = {}, std::set<std::string> gamma = {}) {
    RectMeshSpec spec;
    spec.nx = nx;
    spec.ny = ny;
    spec.interface_y = iy;
    spec.gamma_sides = std::move(gamma);
    return generate_rect_mesh(spec);
}

const std::set<std::string> kAllSides = {"left", "right", "top", "bottom"};

struct Setup {
    Mesh mesh;
    DofMap dofmap;
    CoefficientField coeffs;
    DiscreteOperator op;
};

Setup make_setup(Mesh mesh, CoefficientField coeffs) {
    Setup s{std::move(mesh), {}, std::move(coeffs), {}};
    s.dofmap = build_dofmap(s.mesh);
    s.op = build_operator(s.mesh, s.dofmap, s.coeffs);
    return s;
}

Setup isotropic_setup(Mesh mesh, double mu = 1.0, double eps = 1.0, double b = 0.0) {
    CoefficientField c = CoefficientField::isotropic(mesh, mu, eps, b);
    return make_setup(std::move(mesh), std::move(c));
}

Eigen::VectorXd random_unit_inf(int n, unsigned seed, bool nonnegative) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i)
        v[i] = nonnegative ? std::abs(dist(rng)) : dist(rng);
    return v / v.cwiseAbs().maxCoeff();
}

} // namespace

int main() {
    Gate gate;

    gate.run("1. sectoriality of the sampled numerical range", 10.0,
             [](std::vector<std::string>& problems) {
                 Mesh mesh = rect(32, 32, {}, kAllSides);
                 CoefficientField c = CoefficientField::isotropic(mesh, 1.0);
                 Eigen::Matrix2d mu;
                 mu << 1.0, 1.0, -1.0, 1.0;
                 std::fill(c.mu.begin(), c.mu.end(), mu);
                 c.mu_lower = 1.0;          // ellipticity of sym(mu) = I
                 c.mu_upper = std::sqrt(2.0); // operator norm of mu
                 const Setup s = make_setup(std::move(mesh), std::move(c));
                 const NumericalRangeReport r = numerical_range_probe(s.op, 10000, 1);
                 const double semi_angle = std::atan2(s.op.mu_upper, s.op.mu_lower);
                 expect(problems, r.min_re >= -1e-12, "min Re<K phi, phi>", r.min_re, -1e-12);
                 expect(problems, r.max_abs_arg <= semi_angle + 1e-8, "max |arg|",
                        r.max_abs_arg, semi_angle + 1e-8);
             });

    gate.run("2. submarkovian and positive implicit Euler flow", 30.0,
             [](std::vector<std::string>& problems) {
                 const Setup configs[] = {
                     isotropic_setup(rect(16, 16)),                              // Gamma empty
                     isotropic_setup(rect(16, 16, {}, kAllSides)),               // full boundary
                     isotropic_setup(rect(16, 16, 0.5, {"left", "right"})),      // mixed + Sigma
                 };
                 const char* labels[] = {"no gamma", "full gamma", "mixed with sigma"};
                 for (int k = 0; k < 3; ++k) {
                     const Setup& s = configs[k];
                     for (bool nonneg : {false, true}) {
                         Eigen::VectorXd u =
                             random_unit_inf(s.dofmap.n_free(), 17 + k, nonneg);
                         for (int step = 0; step < 200; ++step) {
                             u = semigroup_step(s.op, u, 0.01, Scheme::implicit_euler,
                                                MassKind::lumped);
                             const double sup = u.cwiseAbs().maxCoeff();
                             if (sup > 1.0 + 1e-12) {
                                 expect(problems, false,
                                        std::string("sup bound (") + labels[k] + ")", sup,
                                        1.0 + 1e-12);
                                 break;
                             }
                             if (nonneg && u.minCoeff() < -1e-12) {
                                 expect(problems, false,
                                        std::string("positivity (") + labels[k] + ")",
                                        u.minCoeff(), -1e-12);
                                 break;
                             }
                         }
                     }
                 }
             });

    gate.run("3. lumped L^p contraction for p in {1, 2, 4, inf}", 0.0,
             [](std::vector<std::string>& problems) {
                 const Setup s = isotropic_setup(rect(16, 16, 0.5, kAllSides));
                 const double inf = std::numeric_limits<double>::infinity();
                 for (double p : {1.0, 2.0, 4.0, inf}) {
                     Eigen::VectorXd u = random_unit_inf(s.dofmap.n_free(), 23, false);
                     double prev = lp_norm(s.mesh, s.dofmap, u, p);
                     for (int step = 0; step < 100; ++step) {
                         u = semigroup_step(s.op, u, 0.02, Scheme::implicit_euler,
                                            MassKind::lumped);
                         const double cur = lp_norm(s.mesh, s.dofmap, u, p);
                         if (cur > prev + 1e-10) {
                             std::ostringstream ss;
                             ss << "p = " << p;
                             expect(problems, false, "norm increase at " + ss.str(),
                                    cur - prev, 1e-10);
                             break;
                         }
                         prev = cur;
                     }
                 }
             });

    gate.run("4. eps-weighted L^2 contraction with eps in {0.5, 3}", 0.0,
             [](std::vector<std::string>& problems) {
                 Mesh mesh = rect(16, 16, 0.5, kAllSides);
                 CoefficientField c = CoefficientField::by_region(mesh, {1.0, 2.0});
                 for (size_t t = 0; t < mesh.triangles.size(); ++t)
                     c.eps.cell[t] = mesh.triangles[t].region == 0 ? 0.5 : 3.0;
                 std::fill(c.eps.gamma_edge.begin(), c.eps.gamma_edge.end(), 3.0);
                 std::fill(c.eps.sigma_edge.begin(), c.eps.sigma_edge.end(), 0.5);
                 c.eps_lower = 0.5;
                 const Setup s = make_setup(std::move(mesh), std::move(c));
                 const Eigen::VectorXd varsigma =
                     nodal_weight(s.mesh, s.dofmap, s.coeffs.eps).cwiseInverse();
                 Eigen::VectorXd u = random_unit_inf(s.dofmap.n_free(), 29, false);
                 double prev = lp_norm(s.mesh, s.dofmap, u, 2.0, varsigma);
                 for (int step = 0; step < 100; ++step) {
                     u = semigroup_step(s.op, u, 0.02, Scheme::implicit_euler,
                                        MassKind::lumped, MassWeight::eps);
                     const double cur = lp_norm(s.mesh, s.dofmap, u, 2.0, varsigma);
                     if (cur > prev + 1e-10) {
                         expect(problems, false, "weighted norm increase", cur - prev, 1e-10);
                         break;
                     }
                     prev = cur;
                 }
             });

    gate.run("5. fractional power quadrature vs dense oracle", 20.0,
             [](std::vector<std::string>& problems) {
                 const Setup s = isotropic_setup(rect(8, 8, {}, kAllSides), 1.5);
                 expect(problems, s.dofmap.n_free() <= 300, "free dof budget",
                        s.dofmap.n_free(), 300);
                 const EigenOracle oracle = dense_eigen_oracle(s.op);
                 const Eigen::VectorXd g = random_unit_inf(s.dofmap.n_free(), 41, false);
                 for (double theta : {0.25, 0.5, 0.75}) {
                     const Eigen::VectorXd quad = fractional_power_apply(s.op, theta, g, 200);
                     const Eigen::VectorXd exact = oracle.apply_function(
                         [theta](double lam) { return std::pow(lam + 1.0, -theta); }, g);
                     const double rel = (quad - exact).norm() / exact.norm();
                     std::ostringstream ss;
                     ss << "theta = " << theta;
                     expect(problems, rel <= 1e-6, "relative error at " + ss.str(), rel, 1e-6);
                 }
             });

    gate.run("6. manufactured convergence across the interface jump", 60.0,
             [](std::vector<std::string>& problems) {
                 const ConvergenceTable table = run_convergence(manufactured_jump(), 3);
                 for (double o : table.l2_orders)
                     expect(problems, o >= 1.9, "L2 order", o, 1.9);
                 for (double o : table.h1_orders)
                     expect(problems, o >= 0.9, "H1 order", o, 0.9);
             });

    gate.run("7. discrete balance law and conservative fluxes", 0.0,
             [](std::vector<std::string>& problems) {
                 // global audit with a pure interface source
                 const Setup s = isotropic_setup(rect(8, 8, 0.5, kAllSides));
                 Loads loads = Loads::zero();
                 loads.f_sigma = [](double, double, double) { return 1.0; };
                 const TimeGrid grid = uniform_grid(0.4, 20);
                 Eigen::VectorXd u0(s.dofmap.n_free());
                 for (int i = 0; i < u0.size(); ++i) {
                     const Vec2& p = s.mesh.vertices[s.dofmap.free_nodes[i]];
                     u0[i] = std::sin(2.0 * p.x) * p.y;
                 }
                 const Trajectory traj = solve_linear(s.op, loads, u0, grid,
                                                      Scheme::implicit_euler, MassKind::lumped);
                 double worst_global = 0.0;
                 for (double r : global_balance_residual(s.op, traj, loads, MassKind::lumped))
                     worst_global = std::max(worst_global, std::abs(r));
                 expect(problems, worst_global <= 1e-11, "global residual", worst_global,
                        1e-11);

                 // additivity over a vertical split and antisymmetry through it
                 auto half = [&](bool left) {
                     std::vector<int> tris;
                     for (size_t t = 0; t < s.mesh.triangles.size(); ++t) {
                         bool is_left = true;
                         for (int v : s.mesh.triangles[t].v)
                             if (s.mesh.vertices[v].x > 0.5 + 1e-14)
                                 is_left = false;
                         if (is_left == left)
                             tris.push_back(static_cast<int>(t));
                     }
                     return make_control_volume(s.mesh, tris);
                 };
                 const ControlVolume cvl = half(true);
                 const ControlVolume cvr = half(false);
                 std::vector<int> all(s.mesh.triangles.size());
                 for (size_t t = 0; t < all.size(); ++t)
                     all[t] = static_cast<int>(t);
                 const ControlVolume cvw = make_control_volume(s.mesh, all);
                 const auto rl = subdomain_flux_balance(s.mesh, s.dofmap, s.coeffs, traj, loads,
                                                        cvl, MassKind::lumped);
                 const auto rr = subdomain_flux_balance(s.mesh, s.dofmap, s.coeffs, traj, loads,
                                                        cvr, MassKind::lumped);
                 const auto rw = subdomain_flux_balance(s.mesh, s.dofmap, s.coeffs, traj, loads,
                                                        cvw, MassKind::lumped);
                 double worst_add = 0.0;
                 for (size_t n = 0; n < rw.size(); ++n)
                     worst_add = std::max(
                         worst_add, std::abs(rl[n].residual + rr[n].residual - rw[n].residual));
                 expect(problems, worst_add <= 1e-12, "additivity defect", worst_add, 1e-12);

                 std::vector<int> divider;
                 for (size_t v = 0; v < s.mesh.vertices.size(); ++v)
                     if (std::abs(s.mesh.vertices[v].x - 0.5) <= 1e-14)
                         divider.push_back(static_cast<int>(v));
                 double worst_anti = 0.0;
                 for (int n = 1; n <= grid.n_steps(); ++n) {
                     const double fl = directed_flux(s.mesh, s.dofmap, s.coeffs, traj, loads,
                                                     cvl, divider, n, MassKind::lumped);
                     const double fr = directed_flux(s.mesh, s.dofmap, s.coeffs, traj, loads,
                                                     cvr, divider, n, MassKind::lumped);
                     worst_anti = std::max(worst_anti, std::abs(fl + fr));
                 }
                 expect(problems, worst_anti <= 1e-12, "antisymmetry defect", worst_anti,
                        1e-12);

                 // audit of the interpolated jump solution shrinks under refinement
                 const ManufacturedProblem prob = manufactured_jump();
                 double prev = 0.0, order = 0.0;
                 for (int level = 0; level < 2; ++level) {
                     const Mesh mesh = prob.make_mesh(level);
                     const DofMap dofmap = build_dofmap(mesh);
                     const CoefficientField coeffs = prob.make_coeffs(mesh);
                     const int N = 8 << level;
                     Trajectory t;
                     t.grid = uniform_grid(prob.T, N);
                     for (int n = 0; n <= N; ++n)
                         t.states.push_back(interp(prob.exact, mesh, dofmap, t.grid.t[n]).values);
                     std::vector<int> lower;
                     for (size_t k = 0; k < mesh.triangles.size(); ++k)
                         if (mesh.triangles[k].region == 0)
                             lower.push_back(static_cast<int>(k));
                     const ControlVolume cv = make_control_volume(mesh, lower);
                     double worst = 0.0;
                     for (const auto& rep : subdomain_flux_balance(mesh, dofmap, coeffs, t,
                                                                   prob.loads, cv,
                                                                   MassKind::lumped))
                         worst = std::max(worst, std::abs(rep.residual));
                     if (level)
                         order = std::log2(prev / worst);
                     prev = worst;
                 }
                 expect(problems, order >= 0.9, "jump subdomain residual order", order, 0.9);
             });

    gate.run("8. Kirchhoff transform layer", 0.0, [](std::vector<std::string>& problems) {
        const Nonlinearity cases[] = {Nonlinearity::identity(), Nonlinearity::power(1.0, 2.0),
                                      Nonlinearity::exponential()};
        const char* labels[] = {"a = 1", "a = 1 + z^2", "a = exp"};
        for (int k = 0; k < 3; ++k) {
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                const double xi = -10.0 + 20.0 * i / 99.0;
                const double back = kirchhoff_inverse(cases[k], kirchhoff(cases[k], xi));
                worst = std::max(worst, std::abs(back - xi));
            }
            expect(problems, worst <= 1e-10, std::string("roundtrip ") + labels[k], worst,
                   1e-10);
        }

        // identity nonlinearity reproduces the linear solve nodewise
        const Setup s = isotropic_setup(rect(8, 8, 0.5, kAllSides), 1.0, 2.0);
        Eigen::VectorXd u0(s.dofmap.n_free());
        for (int i = 0; i < u0.size(); ++i) {
            const Vec2& p = s.mesh.vertices[s.dofmap.free_nodes[i]];
            u0[i] = std::sin(3.14159265358979323846 * p.x) * p.y;
        }
        const TimeGrid grid = uniform_grid(0.4, 20);
        const QuasiResult q = solve_quasilinear(s.op, s.coeffs, Nonlinearity::identity(),
                                                ReactionSpec::zero(), u0, grid);
        const Trajectory lin =
            solve_linear(s.op, Loads::zero(), u0, grid, Scheme::implicit_euler,
                         MassKind::lumped);
        double worst = 0.0;
        for (size_t k = 0; k < lin.states.size(); ++k)
            worst = std::max(worst,
                             (q.u.states[k] - lin.states[k]).cwiseAbs().maxCoeff());
        expect(problems, worst <= 1e-10, "quasilinear vs linear", worst, 1e-10);

        // a = b' keeps the multiplier eta frozen
        const Setup s2 = isotropic_setup(rect(4, 4, {}, kAllSides), 1.0, 1.5);
        const Nonlinearity fd = Nonlinearity::fermi_dirac_b();
        ReactionSpec spec = ReactionSpec::zero();
        spec.F_omega = [](double, double xi) { return std::tanh(xi); };
        const QuasiResult qf =
            solve_quasilinear(s2.op, s2.coeffs, fd, spec,
                              Eigen::VectorXd::Constant(s2.dofmap.n_free(), 0.5),
                              uniform_grid(0.2, 10));
        double eta_dev = 0.0;
        for (const auto& w : qf.w.states) {
            const ReactionField r = reaction(spec, fd, s2.mesh, s2.dofmap, s2.coeffs, 0.0, w);
            eta_dev = std::max(eta_dev, (r.eta.array() - 1.0 / 1.5).abs().maxCoeff());
        }
        expect(problems, eta_dev <= 1e-14, "eta drift for a = b'", eta_dev, 1e-14);
    });

    gate.run("9. maximal solution semantics of the quasilinear solver", 0.0,
             [](std::vector<std::string>& problems) {
                 const Setup s = isotropic_setup(rect(8, 8, {}, kAllSides));
                 const Eigen::VectorXd u0 =
                     Eigen::VectorXd::Constant(s.dofmap.n_free(), 5.0);
                 const TimeGrid grid = uniform_grid(2.0, 200);
                 QuasiControls controls;
                 controls.w_max = 1e4;

                 ReactionSpec blowup = ReactionSpec::zero();
                 auto quad = [](double, double xi) { return xi * xi; };
                 blowup.F_omega = quad;
                 blowup.F_gamma = quad;
                 blowup.F_sigma = quad;
                 const QuasiResult qb = solve_quasilinear(s.op, s.coeffs,
                                                          Nonlinearity::identity(), blowup, u0,
                                                          grid, controls);
                 expect(problems, qb.reason == ExitReason::bound_exceeded,
                        "blow-up reason code (bound exceeded expected)",
                        static_cast<double>(qb.reason), 0.0);
                 expect(problems, qb.t_star > 0.0 && qb.t_star < grid.T(),
                        "blow-up exit strictly inside (0, T)", qb.t_star, grid.T());

                 ReactionSpec bounded = ReactionSpec::zero();
                 bounded.F_omega = [](double, double xi) { return std::tanh(xi); };
                 const QuasiResult qg = solve_quasilinear(s.op, s.coeffs,
                                                          Nonlinearity::identity(), bounded, u0,
                                                          grid, controls);
                 expect(problems, qg.reason == ExitReason::completed, "bounded run completes",
                        static_cast<double>(qg.reason), 0.0);
                 expect(problems, qg.t_star == grid.T(), "bounded run reaches T", qg.t_star,
                        grid.T());
             });

    gate.run("10. rough-data a priori ratio on the graded grid", 0.0,
             [](std::vector<std::string>& problems) {
                 WeightedNormSpec spec;
                 spec.s = 2.0;
                 spec.alpha = 0.6;
                 spec.p = 2.0;
                 double prev = 0.0, variation = 0.0;
                 for (int level = 0; level < 2; ++level) {
                     const int nx = 8 << level;
                     const Setup s = isotropic_setup(rect(nx, nx, {}, kAllSides));
                     Eigen::VectorXd u0(s.dofmap.n_free());
                     for (int i = 0; i < u0.size(); ++i)
                         u0[i] = s.mesh.vertices[s.dofmap.free_nodes[i]].y > 0.5 ? 1.0 : 0.0;
                     const TimeGrid grid = graded_grid(1.0, 20 << level, spec);
                     const Trajectory traj = solve_linear(s.op, Loads::zero(), u0, grid);
                     const double r = apriori_ratio(s.op, traj, u0, Loads::zero(), spec);
                     if (level)
                         variation = std::abs(r - prev) / prev;
                     prev = r;
                 }
                 expect(problems, variation < 0.2, "ratio variation across refinement",
                        variation, 0.2);
             });

    gate.run("11. ultracontractive decay of the 1->inf estimate", 0.0,
             [](std::vector<std::string>& problems) {
                 const Setup s = isotropic_setup(rect(8, 8, {}, kAllSides));
                 UltraProbe probe;
                 probe.t = {0.05, 0.08, 0.125, 0.2, 0.32, 0.5}; // one decade
                 const auto table = ultracontractivity_probe(s.op, probe);
                 for (size_t i = 1; i < table.size(); ++i)
                     if (!(table[i].norm_1_to_inf < table[i - 1].norm_1_to_inf))
                         expect(problems, false, "strict decrease", table[i].norm_1_to_inf,
                                table[i - 1].norm_1_to_inf);
                 const double slope = ultra_loglog_slope(table);
                 expect(problems, slope < 0.0, "log-log slope", slope, 0.0);
             });

    std::printf(gate.failures == 0 ? "acceptance: all criteria passed\n"
                                   : "acceptance: %d criteria failed\n",
                gate.failures);
    return gate.failures == 0 ? 0 : 1;
}
