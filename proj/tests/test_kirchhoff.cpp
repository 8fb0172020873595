#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dynbc/kirchhoff.hpp"

using namespace dynbc;

namespace {

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

Setup isotropic_setup(Mesh mesh, double mu = 1.0, double eps = 1.0) {
    Setup s{std::move(mesh), {}, {}, {}};
    s.dofmap = build_dofmap(s.mesh);
    s.coeffs = CoefficientField::isotropic(s.mesh, mu, eps);
    s.op = build_operator(s.mesh, s.dofmap, s.coeffs);
    return s;
}

} // namespace

TEST_CASE("kirchhoff transform: closed forms") {
    CHECK(kirchhoff(Nonlinearity::identity(), 3.7) == doctest::Approx(3.7).epsilon(1e-14));
    CHECK(kirchhoff(Nonlinearity::identity(), 0.0) == 0.0);
    // a = 1 + z^2: antiderivative z + z^3/3
    CHECK(kirchhoff(Nonlinearity::power(1.0, 2.0), 2.0) ==
          doctest::Approx(2.0 + 8.0 / 3.0).epsilon(1e-12));
    CHECK(kirchhoff(Nonlinearity::exponential(), 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("kirchhoff transform: quadrature path matches the closed form") {
    Nonlinearity nl = Nonlinearity::power(1.0, 2.0);
    Nonlinearity open = nl;
    open.transform_closed.reset();
    open.inverse_closed.reset();
    for (double xi : {-5.0, -0.3, 0.0, 0.7, 4.0})
        CHECK(kirchhoff(open, xi) == doctest::Approx(kirchhoff(nl, xi)).epsilon(1e-11));
}

TEST_CASE("kirchhoff transform: strictly increasing and bounded to the working interval") {
    const Nonlinearity nl = Nonlinearity::power(0.5, 1.0);
    double prev = kirchhoff(nl, -10.0);
    for (double xi = -9.5; xi <= 10.0; xi += 0.5) {
        const double cur = kirchhoff(nl, xi);
        CHECK(cur > prev);
        prev = cur;
    }
    CHECK_THROWS_AS(kirchhoff(nl, 51.0), std::invalid_argument);
}

TEST_CASE("kirchhoff inverse: roundtrip and closed forms") {
    const Nonlinearity nl = Nonlinearity::power(1.0, 2.0);
    CHECK(kirchhoff_inverse(nl, 0.0) == 0.0);
    std::mt19937 rng(51);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int k = 0; k < 100; ++k) {
        const double xi = dist(rng);
        CHECK(std::abs(kirchhoff_inverse(nl, kirchhoff(nl, xi)) - xi) <= 1e-10);
    }
    const Nonlinearity ex = Nonlinearity::exponential();
    CHECK(kirchhoff_inverse(ex, 0.0) == doctest::Approx(0.0));
    CHECK(kirchhoff_inverse(ex, std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(kirchhoff_inverse(ex, std::exp(2.0) - 1.0) == doctest::Approx(2.0).epsilon(1e-11));
    CHECK_THROWS_AS(kirchhoff_inverse(nl, 1e9), std::out_of_range);
}

TEST_CASE("eta: cancellation and composition") {
    CHECK(eta(Nonlinearity::identity(), 1.0, 0.3) == doctest::Approx(1.0).epsilon(1e-14));
    // a = b' (phase separation): eta = 1/eps regardless of w; note the
    // Fermi-Dirac transform is bounded below, so w stays above K(-x_max)
    const Nonlinearity fd = Nonlinearity::fermi_dirac_b();
    for (double w : {-0.7, -0.1, 0.0, 1.0, 8.0})
        CHECK(eta(fd, 2.0, w) == doctest::Approx(0.5).epsilon(1e-14));
    // a = 1 + z^2, b = id, eps = 2, w = K(1) = 4/3: eta = (1+1)/2
    CHECK(eta(Nonlinearity::power(1.0, 2.0), 2.0, 4.0 / 3.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("check_nonlinearity flags a nonpositive diffusion coefficient") {
    CHECK(check_nonlinearity(Nonlinearity::identity()).empty());
    CHECK(check_nonlinearity(Nonlinearity::power(1.0, 2.0)).empty());
    CHECK(check_nonlinearity(Nonlinearity::fermi_dirac_b()).empty());
    Nonlinearity bad = Nonlinearity::identity();
    bad.a = [](double z) { return z; }; // negative on half the working interval
    bad.transform_closed.reset();
    bad.inverse_closed.reset();
    CHECK(!check_nonlinearity(bad).empty());
}

TEST_CASE("fermi-dirac integral: limits and monotonicity") {
    // Boltzmann limit at deep negative argument
    CHECK(fermi_dirac(-10.0) / std::exp(-10.0) >= 0.99);
    CHECK(fermi_dirac(-10.0) / std::exp(-10.0) <= 1.001);
    double prev = fermi_dirac(-50.0);
    for (int k = 1; k <= 100; ++k) {
        const double s = -50.0 + k;
        const double cur = fermi_dirac(s);
        CHECK(cur > prev);
        prev = cur;
    }
    // degenerate limit: F(s) ~ (4/(3 sqrt(pi))) s^{3/2}
    const double s = 50.0;
    const double asym = 4.0 / (3.0 * std::sqrt(3.14159265358979323846)) * std::pow(s, 1.5);
    CHECK(std::abs(fermi_dirac(s) / asym - 1.0) <= 0.02);
    // derivative consistent with finite differences
    const double h = 1e-5;
    for (double x : {-5.0, 0.0, 3.0, 20.0}) {
        const double fd = (fermi_dirac(x + h) - fermi_dirac(x - h)) / (2.0 * h);
        CHECK(fermi_dirac_derivative(x) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("reaction: zero, identity chain, and gamma-only support") {
    const Setup s = isotropic_setup(rect(4, 4, 0.5, kAllSides));
    const int n = s.dofmap.n_free();
    const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(n, -0.5, 0.5);
    const Nonlinearity id = Nonlinearity::identity();

    const ReactionField zero =
        reaction(ReactionSpec::zero(), id, s.mesh, s.dofmap, s.coeffs, 0.0, w);
    CHECK(zero.volume.cwiseAbs().maxCoeff() == 0.0);
    CHECK(reaction_load(s.mesh, s.dofmap, zero).cwiseAbs().maxCoeff() == 0.0);

    ReactionSpec linear = ReactionSpec::zero();
    linear.F_omega = [](double, double xi) { return xi; };
    const ReactionField r = reaction(linear, id, s.mesh, s.dofmap, s.coeffs, 0.0, w);
    CHECK((r.volume - w).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((r.eta.array() - 1.0).abs().maxCoeff() <= 1e-14);

    ReactionSpec surf = ReactionSpec::zero();
    surf.F_gamma = [](double, double) { return 1.0; };
    const ReactionField rg = reaction(surf, id, s.mesh, s.dofmap, s.coeffs, 0.0, w);
    const Eigen::VectorXd load = reaction_load(s.mesh, s.dofmap, rg);
    for (int i = 0; i < n; ++i) {
        const Vec2& p = s.mesh.vertices[s.dofmap.free_nodes[i]];
        const bool on_gamma = p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
        if (!on_gamma)
            CHECK(load[i] == 0.0);
        else
            CHECK(load[i] > 0.0);
    }
}

TEST_CASE("quasilinear: reduces to the linear solver for identity nonlinearity") {
    const Setup s = isotropic_setup(rect(4, 4, 0.5, kAllSides), 1.0, 2.0);
    const int n = s.dofmap.n_free();
    Eigen::VectorXd u0(n);
    for (int i = 0; i < n; ++i) {
        const Vec2& p = s.mesh.vertices[s.dofmap.free_nodes[i]];
        u0[i] = std::sin(3.14159265358979323846 * p.x) * p.y;
    }
    const TimeGrid grid = uniform_grid(0.4, 20);
    const QuasiResult q = solve_quasilinear(s.op, s.coeffs, Nonlinearity::identity(),
                                            ReactionSpec::zero(), u0, grid);
    REQUIRE(q.reason == ExitReason::completed);
    CHECK(q.t_star == grid.T());
    const Trajectory lin = solve_linear(s.op, Loads::zero(), u0, grid,
                                        Scheme::implicit_euler, MassKind::lumped);
    for (size_t k = 0; k < lin.states.size(); ++k)
        CHECK((q.u.states[k] - lin.states[k]).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("quasilinear: eta stays constant for a = b'") {
    const Setup s = isotropic_setup(rect(4, 4, {}, kAllSides), 1.0, 1.5);
    const int n = s.dofmap.n_free();
    const Eigen::VectorXd u0 = Eigen::VectorXd::Constant(n, 0.5);
    ReactionSpec spec = ReactionSpec::zero();
    spec.F_omega = [](double, double xi) { return std::tanh(xi); };
    const Nonlinearity fd = Nonlinearity::fermi_dirac_b();
    const QuasiResult q =
        solve_quasilinear(s.op, s.coeffs, fd, spec, u0, uniform_grid(0.2, 10));
    REQUIRE(q.reason == ExitReason::completed);
    // probe eta along the accepted trajectory
    for (const auto& w : q.w.states) {
        const ReactionField r = reaction(spec, fd, s.mesh, s.dofmap, s.coeffs, 0.0, w);
        CHECK((r.eta.array() - 1.0 / 1.5).abs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("quasilinear: eta positivity along accepted steps") {
    const Setup s = isotropic_setup(rect(4, 4, {}, kAllSides));
    const int n = s.dofmap.n_free();
    Eigen::VectorXd u0(n);
    for (int i = 0; i < n; ++i)
        u0[i] = 0.5 + 0.3 * std::sin(7.0 * i);
    const Nonlinearity nl = Nonlinearity::power(0.5, 2.0);
    const QuasiResult q = solve_quasilinear(s.op, s.coeffs, nl, ReactionSpec::zero(), u0,
                                            uniform_grid(0.3, 15));
    REQUIRE(q.reason == ExitReason::completed);
    for (const auto& w : q.w.states) {
        const ReactionField r =
            reaction(ReactionSpec::zero(), nl, s.mesh, s.dofmap, s.coeffs, 0.0, w);
        CHECK(r.eta.minCoeff() > 0.0);
    }
}

TEST_CASE("quasilinear: quadratic reaction exits early, bounded reaction completes") {
    const Setup s = isotropic_setup(rect(4, 4, {}, kAllSides));
    const int n = s.dofmap.n_free();
    const Eigen::VectorXd u0 = Eigen::VectorXd::Constant(n, 5.0);

    ReactionSpec blowup = ReactionSpec::zero();
    auto quad = [](double, double xi) { return xi * xi; };
    blowup.F_omega = quad;
    blowup.F_gamma = quad;
    blowup.F_sigma = quad;
    QuasiControls controls;
    controls.w_max = 1e4;
    const TimeGrid grid = uniform_grid(2.0, 200);
    const QuasiResult qb = solve_quasilinear(s.op, s.coeffs, Nonlinearity::identity(), blowup,
                                             u0, grid, controls);
    CHECK(qb.reason == ExitReason::bound_exceeded);
    CHECK(qb.t_star < grid.T());
    CHECK(to_string(qb.reason) == "bound exceeded");

    ReactionSpec bounded = ReactionSpec::zero();
    bounded.F_omega = [](double, double xi) { return std::tanh(xi); };
    const QuasiResult qg = solve_quasilinear(s.op, s.coeffs, Nonlinearity::identity(), bounded,
                                             u0, grid, controls);
    CHECK(qg.reason == ExitReason::completed);
    CHECK(qg.t_star == grid.T());
}

TEST_CASE("quasilinear: initial continuity in the sup norm") {
    const Setup s = isotropic_setup(rect(6, 6, {}, kAllSides));
    const int n = s.dofmap.n_free();
    Eigen::VectorXd u0(n);
    for (int i = 0; i < n; ++i) {
        const Vec2& p = s.mesh.vertices[s.dofmap.free_nodes[i]];
        u0[i] = std::cos(2.0 * p.x) * std::sin(1.0 + p.y);
    }
    const Nonlinearity nl = Nonlinearity::power(1.0, 2.0);
    double prev_C = 0.0;
    for (int level = 0; level < 2; ++level) {
        const int N = 20 << level;
        const TimeGrid grid = uniform_grid(0.2, N);
        const QuasiResult q =
            solve_quasilinear(s.op, s.coeffs, nl, ReactionSpec::zero(), u0, grid);
        REQUIRE(q.reason == ExitReason::completed);
        const double diff = (q.u.states[1] - q.u.states[0]).cwiseAbs().maxCoeff();
        const double C = diff / std::sqrt(grid.tau(1));
        CHECK(std::isfinite(C));
        if (level)
            CHECK(C <= 4.0 * prev_C + 1e-12);
        prev_C = C;
    }
}

TEST_CASE("quasilinear: fixed-point refresh converges without flags on smooth data") {
    const Setup s = isotropic_setup(rect(4, 4, {}, kAllSides));
    const int n = s.dofmap.n_free();
    Eigen::VectorXd u0(n);
    for (int i = 0; i < n; ++i)
        u0[i] = 0.2 * std::sin(0.5 * i);
    ReactionSpec spec = ReactionSpec::zero();
    spec.F_omega = [](double, double xi) { return 0.5 * xi; };
    const QuasiResult q = solve_quasilinear(s.op, s.coeffs, Nonlinearity::power(1.0, 2.0),
                                            spec, u0, uniform_grid(0.2, 10));
    REQUIRE(q.reason == ExitReason::completed);
    CHECK(!q.nonmonotone_flagged);
    for (double r : q.step_residuals)
        CHECK(r <= 1e-9);
}
