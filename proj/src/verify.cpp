#include "pbundle/verify.hpp"

#include "pbundle/observables.hpp"
#include "pbundle/reference.hpp"
#include "pbundle/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace pbundle {

namespace {

CheckResult make(std::string name, double value, double tol, std::string detail = {}) {
    // NaN never passes.
    return CheckResult{std::move(name), value <= tol, value, tol, std::move(detail)};
}

Eigen::VectorXd sorted_eigenvalues(const DenseMatrix& H) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double max_abs(const DenseMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Deterministic parameter draws; no stochastic component reaches user output.
struct Draws {
    std::mt19937_64 rng{20240611u};
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    ModelParams model() {
        ModelParams m;
        m.omega = uniform(0.3, 1.5);
        m.Omega = uniform(-1.5, 1.5);
        m.delta = uniform(-0.2, 0.2);
        m.g_x = 1.0;
        m.g_k = uniform(-1.5, 1.5);
        return m;
    }
    DenseMatrix density(Eigen::Index D) {
        DenseMatrix A(D, D);
        for (Eigen::Index i = 0; i < D; ++i) {
            for (Eigen::Index j = 0; j < D; ++j) A(i, j) = cplx(uniform(-1, 1), uniform(-1, 1));
        }
        DenseMatrix rho = A * A.adjoint();
        return rho / rho.trace().real();
    }
};

ModelParams blockade_point() {
    ModelParams m;
    m.omega = m.Omega = 1.0;
    m.g_k = 1.0;
    m.delta = 0.005;
    return m;
}

// Leading operator block on Fock levels < n_max, where truncation cannot act.
DenseMatrix interior(const DenseMatrix& m, int n_max) { return m.topLeftCorner(2 * n_max, 2 * n_max); }

}  // namespace

CheckResult check_block_matrix_elements(const HamiltonianBuilder& h, int n_max) {
    Draws draws;
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const ModelParams m = draws.model();
        const Truncation t(n_max);
        const DenseMatrix H = h(m, t).dense() + 0.5 * m.Omega * DenseMatrix::Identity(t.dim(), t.dim());
        const DenseMatrix B = reference::block_matrix(m, n_max, reference::rotated_frame_delta_entry(m.delta));
        worst = std::max(worst, max_abs(H - B));
    }
    return make("model.block_matrix_elements", worst, 1e-12, "H' + Omega/2 against the dressed-basis block matrix");
}

CheckResult check_liouvillian_oracle(int trials) {
    Draws draws;
    double worst = 0.0;
    const int n_max = 3;  // Hilbert dimension 8
    for (int trial = 0; trial < trials; ++trial) {
        const ModelParams m = draws.model();
        DissipationParams d;
        d.kappa_e = draws.uniform(0.0, 0.3);
        d.kappa_d = draws.uniform(0.0, 0.3);
        d.gamma_d = draws.uniform(0.0, 0.3);
        const Truncation t(n_max);
        const OperatorMatrix H = hamiltonian_rotated(m, t);
        const Liouvillian L = build_liouvillian(H, d);
        const DenseMatrix rho = draws.density(t.dim());
        const DenseMatrix lhs = apply_liouvillian(L, rho);
        const DenseMatrix rhs = reference::master_rhs(H.dense(), d, n_max, rho);
        worst = std::max(worst, max_abs(lhs - rhs) / std::max(1.0, max_abs(rhs)));
    }
    return make("dynamics.liouvillian_termwise_oracle", worst, 1e-12, "8-dimensional random instances");
}

bool all_passed(const std::vector<CheckResult>& r) {
    return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const HamiltonianBuilder& build = opt.hamiltonian;
    Draws draws;

    {  // [a, a^dag] = I below the truncation edge
        const Truncation t(8);
        const OperatorMatrix a = annihilation(t);
        const DenseMatrix c = commutator(a, a.adjoint()).dense();
        const double dev = max_abs(interior(c, t.n_max()) - DenseMatrix::Identity(2 * t.n_max(), 2 * t.n_max()));
        out.push_back(make("fockspace.ladder_commutator", dev, 1e-12));
    }
    {
        double herm = 0.0, spec = 0.0, rx = 0.0;
        const Truncation t(10);
        for (int trial = 0; trial < 5; ++trial) {
            const ModelParams m = draws.model();
            const OperatorMatrix Hr = build(m, t);
            const OperatorMatrix Hl = hamiltonian_lab_frame(m, t);
            herm = std::max({herm, Hr.hermiticity_residual(), Hl.hermiticity_residual()});
            spec = std::max(spec, (sorted_eigenvalues(Hr.dense()) - sorted_eigenvalues(Hl.dense())).cwiseAbs().maxCoeff());
            rx = std::max(rx, max_abs(symmetry_transform(SymmetryKind::spin_rotation_Rx, Hl).dense() - Hr.dense()));
        }
        out.push_back(make("model.hermiticity", herm, kHermitianTolerance));
        out.push_back(make("model.lab_rotated_spectral_equality", spec, 1e-10));
        out.push_back(make("model.rx_maps_lab_to_rotated", rx, 1e-12));
    }
    {
        const Truncation t(10);
        double par = 0.0, exc = 0.0, ajc = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            ModelParams m = draws.model();
            m.delta = 0.0;
            par = std::max(par, commutator(build(m, t), parity(t)).max_abs());
            ModelParams j = m;
            j.g_k = j.g_x;
            exc = std::max(exc, max_abs(interior(commutator(build(j, t), excitation_number(t)).dense(), t.n_max())));
            ModelParams anti = m, mirrored = m;
            anti.g_k = -m.g_x;
            mirrored.g_k = m.g_x;
            mirrored.Omega = -m.Omega;
            ajc = std::max(ajc, (sorted_eigenvalues(build(anti, t).dense()) - sorted_eigenvalues(build(mirrored, t).dense()))
                                    .cwiseAbs()
                                    .maxCoeff());
        }
        out.push_back(make("model.parity_commutation_delta0", par, 1e-12));
        out.push_back(make("model.jcm_excitation_conservation", exc, 1e-12));
        out.push_back(make("model.antijcm_jcm_spectral_equivalence", ajc, 1e-10));
    }
    out.push_back(check_block_matrix_elements(build));
    {  // the literal printed detuning sign only conjugates the matrix
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const ModelParams m = draws.model();
            const Truncation t(8);
            const DenseMatrix printed = reference::block_matrix(m, t.n_max(), reference::printed_delta_entry(m.delta));
            const DenseMatrix H = build(m, t).dense() + 0.5 * m.Omega * DenseMatrix::Identity(t.dim(), t.dim());
            worst = std::max(worst, (sorted_eigenvalues(printed) - sorted_eigenvalues(H)).cwiseAbs().maxCoeff());
        }
        out.push_back(make("model.block_matrix_printed_spectrum", worst, 1e-10));
    }
    {
        const int n_max = 40;
        ModelParams m;
        m.omega = m.Omega = 1.0;
        m.g_k = m.g_x = 1.0;
        m.delta = 0.0;
        const SpectrumResult s = diagonalize(build(m, Truncation(n_max)), m);
        std::vector<double> expect = reference::jcm_levels(m.omega, m.g_x, n_max);
        expect.push_back(n_max * m.omega + m.Omega);  // |n_max, e> has no partner
        std::sort(expect.begin(), expect.end());
        double worst = 0.0;
        for (std::size_t i = 0; i < expect.size(); ++i) worst = std::max(worst, std::abs(s.energies(static_cast<Eigen::Index>(i)) - expect[i]));
        out.push_back(make("spectrum.jcm_analytic_levels", worst, 1e-9, "n_max = 40"));
    }

    if (!opt.include_dynamics) return out;

    out.push_back(check_liouvillian_oracle());
    {
        double trace = 0.0, re = -1e300;
        for (int trial = 0; trial < 3; ++trial) {
            const ModelParams m = draws.model();
            DissipationParams d;
            const Liouvillian L = build_liouvillian(m, d, Truncation(3));
            trace = std::max(trace, trace_preservation_residual(L));
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(L.matrix), false);
            re = std::max(re, es.eigenvalues().real().maxCoeff());
        }
        const Liouvillian big = build_liouvillian(blockade_point(), DissipationParams{}, Truncation(opt.n_max));
        trace = std::max(trace, trace_preservation_residual(big));
        out.push_back(make("dynamics.trace_preservation", trace, 1e-10));
        out.push_back(make("dynamics.spectrum_left_half_plane", re, 1e-10));
    }

    const DissipationParams d;
    const ModelParams spb = blockade_point();
    SteadyStateOptions so;
    so.adaptive = false;
    const SteadyState ss = solve_steady_state(spb, d, opt.n_max, so);
    const DensityDiagnostics diag = check_density(ss.rho.matrix());
    out.push_back(make("dynamics.steady_state_residual", ss.residual, kSteadyStateResidual));
    out.push_back(make("dynamics.steady_state_hermitian_unit_trace", std::max(diag.hermiticity, diag.trace_error), 1e-10));
    out.push_back(make("dynamics.steady_state_psd", -diag.min_eigenvalue, 1e-8, "reported value is -min eigenvalue"));

    {  // small instance: gap, and agreement of direct solve with long propagation
        const Truncation t(8);
        const Liouvillian L = build_liouvillian(spb, d, t);
        const Eigen::VectorXd sv = liouvillian_singular_values(L);
        out.push_back(make("dynamics.steady_state_gap", -sv(1), -1e-6, "reported value is -(second smallest singular value)"));
        const SteadyState direct = steady_state(L);
        const std::vector<double> tau{0.0, 50.0 / d.kappa_d};
        const DenseMatrix rho0 = reference::fock_state(0, t.n_max());
        const auto evolved = propagate(L, rho0, tau);
        out.push_back(make("dynamics.direct_vs_propagated_steady_state", max_abs(evolved.back() - direct.rho.matrix()), 1e-6,
                           "t = 50/kappa_d, n_max = 8"));
    }
    {
        const std::vector<double> p = fock_distribution(ss.rho.matrix(), ss.rho.truncation());
        const OperatorMatrix a = annihilation(ss.rho.truncation());
        double worst = 0.0;
        for (int mth = 1; mth <= 4; ++mth) {
            const OperatorMatrix am = power(a, mth);
            const double direct = (am.adjoint() * am).dense().cwiseProduct(ss.rho.matrix().transpose()).sum().real();
            worst = std::max(worst, std::abs(direct - factorial_moment(p, mth)));
        }
        out.push_back(make("observables.moment_consistency", worst, 1e-9));
    }
    {
        const Liouvillian L = build_liouvillian(spb, d, ss.rho.truncation());
        const auto tau = default_tau_grid(d.kappa_d);
        double tau0 = 0.0, tail = 0.0;
        for (int n : {1, 2}) {
            const CorrelationSeries s = two_time_correlation(L, ss.rho, n, tau);
            tau0 = std::max(tau0, std::abs(s.values.front() - equal_time_correlation(ss.rho, n, 2)) /
                                      std::max(1.0, std::abs(s.values.front())));
            for (std::size_t i = 0; i < tau.size(); ++i) {
                if (tau[i] >= 8.0 / d.kappa_d) tail = std::max(tail, std::abs(s.values[i] - 1.0));
            }
        }
        out.push_back(make("observables.regression_tau0", tau0, 1e-8));

        // Precondition of the factorization property: slowest decay rate above kappa_d/10.
        const Liouvillian Ls = build_liouvillian(spb, d, Truncation(8));
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(Ls.matrix), false);
        std::vector<double> rates;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rates.push_back(-es.eigenvalues()(i).real());
        std::sort(rates.begin(), rates.end());
        const double gap = rates.size() > 1 ? rates[1] : 0.0;
        std::ostringstream detail;
        detail << "tau in [8, 10]/kappa_d at the blockade point, n = 1, 2; slowest decay rate " << gap << " (kappa_d/10 = "
               << d.kappa_d / 10 << ")";
        out.push_back(make("observables.long_time_factorization", tail, 0.02, detail.str()));
    }
    return out;
}

}  // namespace pbundle
