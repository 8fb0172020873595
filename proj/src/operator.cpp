#include "dynbc/operator.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace dynbc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

DiscreteOperator build_operator(const Mesh& mesh, const DofMap& dofmap,
                                const CoefficientField& coeffs) {
    const auto bad = check_coefficients(mesh, coeffs);
    if (!bad.empty())
        throw std::invalid_argument("build_operator: " + bad.front());
    DiscreteOperator op;
    op.mesh = &mesh;
    op.dofmap = &dofmap;
    op.K = assemble_stiffness(mesh, dofmap, coeffs.mu);
    op.B = assemble_b_operator(mesh, dofmap, coeffs.b_gamma, coeffs.b_sigma);
    const MeasureWeight unit = MeasureWeight::unit(mesh);
    op.M_consistent = assemble_mass(mesh, dofmap, unit, false);
    op.M_lumped = assemble_mass(mesh, dofmap, unit, true);
    op.M_eps_consistent = assemble_mass(mesh, dofmap, coeffs.eps, false);
    op.M_eps_lumped = assemble_mass(mesh, dofmap, coeffs.eps, true);
    op.mu_lower = coeffs.mu_lower;
    op.mu_upper = coeffs.mu_upper;
    return op;
}

Eigen::VectorXd sparse_solve(const SparseMat& A, const Eigen::VectorXd& rhs) {
    Eigen::SparseLU<SparseMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("sparse_solve: factorization failed");
    Eigen::VectorXd x = lu.solve(rhs);
    const double rhs_norm = rhs.norm();
    if (rhs_norm > 0.0) {
        const double rel = (A * x - rhs).norm() / rhs_norm;
        if (!(rel <= 1e-10))
            throw std::runtime_error("sparse_solve: relative residual " + std::to_string(rel));
    }
    return x;
}

Eigen::VectorXd resolvent_apply(const DiscreteOperator& op, double lambda,
                                const Eigen::VectorXd& g, bool include_B, MassKind mass) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("resolvent_apply: lambda must be positive");
    const SparseMat& M = op.mass(mass);
    SparseMat A = op.K + lambda * M;
    if (include_B)
        A += op.B;
    return sparse_solve(A, M * g);
}

Eigen::VectorXd semigroup_step(const DiscreteOperator& op, const Eigen::VectorXd& w, double tau,
                               Scheme scheme, MassKind mass, MassWeight weight) {
    if (!(tau > 0.0))
        throw std::invalid_argument("semigroup_step: tau must be positive");
    const SparseMat& M = op.mass(mass, weight);
    const SparseMat KB = op.K + op.B;
    if (scheme == Scheme::implicit_euler)
        return sparse_solve(M + tau * KB, M * w);
    return sparse_solve(M + 0.5 * tau * KB, M * w - 0.5 * tau * (KB * w));
}

NumericalRangeReport numerical_range_probe(const DiscreteOperator& op, int n_samples,
                                           unsigned seed) {
    const int n = op.K.rows();
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    NumericalRangeReport rep;
    rep.min_re = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_samples; ++s) {
        Eigen::VectorXd u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = gauss(rng);
            v[i] = gauss(rng);
        }
        const Eigen::VectorXd Ku = op.K * u;
        const Eigen::VectorXd Kv = op.K * v;
        const std::complex<double> z(u.dot(Ku) + v.dot(Kv), u.dot(Kv) - v.dot(Ku));
        if (std::abs(z) <= 1e-14)
            continue;
        rep.max_abs_arg = std::max(rep.max_abs_arg, std::abs(std::arg(z)));
        rep.min_re = std::min(rep.min_re, z.real());
        ++rep.n_used;
    }
    return rep;
}

Eigen::VectorXd fractional_power_apply(const DiscreteOperator& op, double theta,
                                       const Eigen::VectorXd& g, int n_nodes, bool include_B,
                                       MassKind mass) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("fractional_power_apply: theta must lie in (0,1)");
    if (n_nodes < 10)
        n_nodes = 10;

    const double target = 1e-9;
    const double c = std::sin(kPi * theta) / kPi;

    const SparseMat& M = op.mass(mass);
    SparseMat KB = op.K;
    if (include_B)
        KB += op.B;

    // Crude upper spectral bound of M^{-1}(K+B), for the truncation choice.
    double lam_max = 1.0;
    {
        const SparseMat Ml = op.mass(MassKind::lumped);
        Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(KB.rows());
        for (int k = 0; k < KB.outerSize(); ++k)
            for (SparseMat::InnerIterator it(KB, k); it; ++it)
                rowsum[it.row()] += std::abs(it.value());
        for (int i = 0; i < KB.rows(); ++i)
            lam_max = std::max(lam_max, rowsum[i] / Ml.coeff(i, i));
    }

    // Truncation of the integral after t = e^y. The discarded tails are
    // restored by their leading-order corrections below, so the interval only
    // needs the second-order tail terms below the target:
    // lower ~ t0^{2-theta}, upper ~ (lam_max+1) T^{-(1+theta)}.
    const double L_low = -std::log(target * (2.0 - theta) / c) / (2.0 - theta);
    const double L_up =
        std::log(c * 10.0 * (lam_max + 1.0) / ((1.0 + theta) * target)) / (1.0 + theta);

    // Composite 10-point Gauss-Legendre on [-L_low, L_up].
    static const double gl_x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                   0.8650633666889845, 0.9739065285171717};
    static const double gl_w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                   0.1494513491505806, 0.0666713443086881};
    const int n_panels = std::max(1, n_nodes / 10);
    const double a = -L_low;
    const double b = L_up;
    const double h = (b - a) / n_panels;

    const Eigen::VectorXd Mg = M * g;

    // Leading-order tail corrections: (A+1+t)^{-1} ~ (A+1)^{-1} below t0 and
    // ~ t^{-1} I above T.
    const double t0 = std::exp(-L_low);
    const double T = std::exp(L_up);
    Eigen::VectorXd result = c * (std::pow(t0, 1.0 - theta) / (1.0 - theta)) *
                             sparse_solve(KB + M, Mg);
    result += (c * std::pow(T, -theta) / theta) * g;
    for (int p = 0; p < n_panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int k = 0; k < 10; ++k) {
            const double xk = (k < 5) ? -gl_x[4 - k] : gl_x[k - 5];
            const double wk = (k < 5) ? gl_w[4 - k] : gl_w[k - 5];
            const double y = mid + 0.5 * h * xk;
            const double t = std::exp(y);
            // integrand: e^{(1-theta) y} (A + 1 + t)^{-1} g
            const Eigen::VectorXd x = sparse_solve(KB + (1.0 + t) * M, Mg);
            result += (c * 0.5 * h * wk * std::exp((1.0 - theta) * y)) * x;
        }
    }
    return result;
}

Eigen::VectorXd EigenOracle::apply_function(const std::function<double(double)>& f,
                                            const Eigen::VectorXd& g) const {
    Eigen::VectorXd coeff;
    if (symmetric) {
        coeff = vectors.transpose() * (M * g);
    } else {
        coeff = vectors.fullPivLu().solve(g);
    }
    for (int i = 0; i < coeff.size(); ++i)
        coeff[i] *= f(eigenvalues[i]);
    return vectors * coeff;
}

EigenOracle dense_eigen_oracle(const DiscreteOperator& op, bool include_B, MassKind mass) {
    const int n = op.K.rows();
    if (n > 2000)
        throw std::invalid_argument("dense_eigen_oracle: free-dof count exceeds 2000");
    Eigen::MatrixXd K = Eigen::MatrixXd(op.K);
    if (include_B)
        K += Eigen::MatrixXd(op.B);
    const Eigen::MatrixXd M = Eigen::MatrixXd(op.mass(mass));

    EigenOracle oracle;
    oracle.M = M;
    const double asym = (K - K.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1e-300, K.cwiseAbs().maxCoeff());
    if (asym <= 1e-12 * scale) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (K + K.transpose()), M);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("dense_eigen_oracle: factorization failed");
        oracle.eigenvalues = es.eigenvalues();
        oracle.vectors = es.eigenvectors();
        oracle.symmetric = true;
    } else {
        const Eigen::MatrixXd A = M.fullPivLu().solve(K);
        Eigen::EigenSolver<Eigen::MatrixXd> es(A);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("dense_eigen_oracle: factorization failed");
        const double imag_max = es.eigenvalues().imag().cwiseAbs().maxCoeff();
        if (imag_max > 1e-8 * (1.0 + es.eigenvalues().real().cwiseAbs().maxCoeff()))
            throw std::runtime_error("dense_eigen_oracle: complex spectrum, no real factorization");
        oracle.eigenvalues = es.eigenvalues().real();
        oracle.vectors = es.eigenvectors().real();
        oracle.symmetric = false;
    }
    oracle.residual = (K * oracle.vectors - M * oracle.vectors * oracle.eigenvalues.asDiagonal())
                          .norm() /
                      std::max(1e-300, K.norm());
    if (!(oracle.residual <= 1e-8))
        throw std::runtime_error("dense_eigen_oracle: reconstruction residual too large");
    return oracle;
}

std::vector<UltraSample> ultracontractivity_probe(const DiscreteOperator& op,
                                                  const UltraProbe& probe) {
    for (size_t i = 0; i < probe.t.size(); ++i) {
        if (!(probe.t[i] > 0.0) || (i > 0 && probe.t[i] <= probe.t[i - 1]))
            throw std::invalid_argument("ultracontractivity_probe: t samples must be positive "
                                        "and strictly increasing");
    }
    const int n = op.K.rows();
    const DofMap& dm = *op.dofmap;
    std::vector<UltraSample> table;
    for (double t : probe.t) {
        const int nsteps = std::max(1, probe.steps_per_t);
        const double tau = t / nsteps;
        Eigen::SparseLU<SparseMat> lu;
        const SparseMat A = op.M_lumped + tau * (op.K + op.B);
        lu.compute(A);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("ultracontractivity_probe: factorization failed");
        double best = 0.0;
        for (int j = 0; j < n; ++j) {
            const int vtx = dm.free_nodes[j];
            const double mj = dm.volume_weight[vtx] + dm.surface_weight[vtx];
            Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
            w[j] = 1.0 / mj;
            for (int s = 0; s < nsteps; ++s)
                w = lu.solve(op.M_lumped * w);
            best = std::max(best, w.cwiseAbs().maxCoeff());
        }
        table.push_back({t, best});
    }
    return table;
}

double ultra_loglog_slope(const std::vector<UltraSample>& samples) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& s : samples) {
        if (!(s.t > 0.0) || !(s.norm_1_to_inf > 0.0))
            continue;
        const double x = std::log(s.t);
        const double y = std::log(s.norm_1_to_inf);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 2)
        return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace dynbc
